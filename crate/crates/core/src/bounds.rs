//! Discriminant tables and the explicit prime bounds C(n).
//!
//! The exact bound for degree n needs the complete list of fundamental
//! discriminants with class number at most n; that list is bundled for
//! h <= 7 and re-verified row by row on every load (class numbers are
//! recomputed by form enumeration, never trusted). For n up to 100 only
//! the largest discriminant per class number is needed, which the second
//! bundled table carries; the bound from it is an over-approximation, so
//! it is labeled Rough.
//!
//! C(n) itself is max(largest prime <= 3n+1, largest prime factor of any
//! listed |d| with h <= n). Every returned bound carries a witness that
//! can be revalidated independently.

use crate::arith::{
    is_fundamental_discriminant, is_prime, largest_prime_at_most, largest_prime_factor,
};
use crate::error::{Error, Result};
use crate::forms;
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

/// Complete list of fundamental discriminants with h <= some bound,
/// stored as (h, |d|) rows sorted by (h, |d|).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantTable {
    pub rows: Vec<(u64, u64)>,
    pub declared_complete_through: u64,
}

/// Largest fundamental |d| per class number h = 1..=100.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxDiscTable {
    pub rows: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Exact,
    Rough,
}

/// Where a bound value came from, in revalidatable form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum Witness {
    /// c_n is the largest prime factor of a listed discriminant.
    DiscriminantFactor { prime: u64, abs_d: u64, h: u64 },
    /// c_n is the largest prime <= 3n+1.
    SmallPrimeClause { prime: u64 },
    /// c_n is the largest prime <= the largest listed |d| (rough method:
    /// the prime need not divide anything).
    DiscriminantCap { prime: u64, max_abs_d: u64, h: u64 },
}

impl Witness {
    /// Recheck the certificate from scratch. h-carrying variants recompute
    /// the class number by form enumeration.
    pub fn validate(&self, n: u64) -> Result<()> {
        let fail = |msg: String| Err(Error::data(msg));
        match *self {
            Witness::DiscriminantFactor { prime, abs_d, h } => {
                if !is_prime(prime) {
                    return fail(format!("witness {prime} is not prime"));
                }
                if abs_d % prime != 0 {
                    return fail(format!("witness prime {prime} does not divide {abs_d}"));
                }
                if h > n {
                    return fail(format!("witness class number {h} exceeds degree {n}"));
                }
                let actual = forms::class_number(-(abs_d as i64))?;
                if actual != h {
                    return fail(format!("witness h({abs_d}) = {actual}, claimed {h}"));
                }
            }
            Witness::SmallPrimeClause { prime } => {
                if largest_prime_at_most(3 * n + 1)? != prime {
                    return fail(format!("{prime} is not the largest prime <= 3n+1"));
                }
            }
            Witness::DiscriminantCap { prime, max_abs_d, h } => {
                if largest_prime_at_most(max_abs_d)? != prime {
                    return fail(format!("{prime} is not the largest prime <= {max_abs_d}"));
                }
                if h > n {
                    return fail(format!("witness class number {h} exceeds degree {n}"));
                }
                let actual = forms::class_number(-(max_abs_d as i64))?;
                if actual != h {
                    return fail(format!("witness h({max_abs_d}) = {actual}, claimed {h}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub n: u64,
    pub c_n: u64,
    pub witness: Witness,
    pub method: Method,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletenessReport {
    pub scan_limit: u64,
    pub complete_through: u64,
    pub fields_checked: u64,
    pub note: String,
}

// rows plus the complete_through comment value, if one was present
type ParsedRows = (Vec<(u64, u64)>, Option<u64>);

fn parse_rows(text: &str, header: &str) -> Result<ParsedRows> {
    let mut rows = Vec::new();
    let mut complete_through = None;
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("complete_through=") {
                let v = v
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Error::data(format!("line {}: bad complete_through", idx + 1)))?;
                complete_through = Some(v);
            }
            continue;
        }
        if !saw_header {
            if line != header {
                return Err(Error::data(format!(
                    "line {}: expected header '{header}', got '{line}'",
                    idx + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| Error::data(format!("line {}: expected 'x,y', got '{line}'", idx + 1)))?;
        let a = a.trim().parse::<u64>();
        let b = b.trim().parse::<u64>();
        match (a, b) {
            (Ok(a), Ok(b)) => rows.push((a, b)),
            _ => return Err(Error::data(format!("line {}: malformed row '{line}'", idx + 1))),
        }
    }
    if !saw_header {
        return Err(Error::data(format!("no '{header}' header found (empty file?)")));
    }
    if rows.is_empty() {
        return Err(Error::data("table has no rows"));
    }
    Ok((rows, complete_through))
}

/// Parse the discriminant list CSV; structural checks only (ordering,
/// duplicates, the completeness comment). Use load_table for the full
/// recomputation.
pub fn parse_discriminant_table(text: &str) -> Result<DiscriminantTable> {
    let (rows, complete_through) = parse_rows(text, "h,abs_d")?;
    let declared_complete_through = complete_through
        .ok_or_else(|| Error::data("missing '# complete_through=N' comment"))?;
    for w in rows.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::data(format!(
                "rows not strictly sorted by (h, abs_d): {:?} then {:?}",
                w[0], w[1]
            )));
        }
    }
    if let Some(&(h_max, _)) = rows.last() {
        if h_max != declared_complete_through {
            return Err(Error::data(format!(
                "largest listed h = {h_max} but complete_through = {declared_complete_through}"
            )));
        }
    }
    Ok(DiscriminantTable { rows, declared_complete_through })
}

/// Parse the per-h maximum CSV: exactly one row per h = 1..=100, ascending.
pub fn parse_max_table(text: &str) -> Result<MaxDiscTable> {
    let (rows, _) = parse_rows(text, "h,max_abs_d")?;
    if rows.len() != 100 {
        return Err(Error::data(format!("expected 100 rows, got {}", rows.len())));
    }
    for (i, &(h, _)) in rows.iter().enumerate() {
        if h != i as u64 + 1 {
            return Err(Error::data(format!("expected row for h = {}, got h = {h}", i + 1)));
        }
    }
    Ok(MaxDiscTable { rows })
}

fn verify_rows(rows: &[(u64, u64)]) -> Result<()> {
    let mut failures: Vec<String> = rows
        .par_iter()
        .filter_map(|&(h, abs_d)| {
            let d = -(abs_d as i64);
            match is_fundamental_discriminant(d) {
                Ok(true) => {}
                _ => return Some(format!("row ({h},{abs_d}): -{abs_d} is not fundamental")),
            }
            match forms::class_number(d) {
                Ok(actual) if actual == h => None,
                Ok(actual) => Some(format!("row ({h},{abs_d}): recomputed h = {actual}")),
                Err(e) => Some(format!("row ({h},{abs_d}): {e}")),
            }
        })
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        failures.sort();
        Err(Error::data(format!("verification failed: {}", failures.join("; "))))
    }
}

/// Read, parse, and re-verify every row of a discriminant list: each |d|
/// must be fundamental and its recomputed class number must match.
pub fn load_table(path: &Path) -> Result<DiscriminantTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let table = parse_discriminant_table(&text)?;
    verify_rows(&table.rows)?;
    Ok(table)
}

/// Read, parse, and re-verify the per-h maximum table. Maximality itself
/// is not re-proven (that needs the full census this table summarizes);
/// fundamentality and the class number of each listed |d| are.
pub fn load_max_table(path: &Path) -> Result<MaxDiscTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let table = parse_max_table(&text)?;
    verify_rows(&table.rows)?;
    Ok(table)
}

const BUNDLED_DISCS: &str = include_str!("../data/discs_h_le_7.csv");
const BUNDLED_MAX: &str = include_str!("../data/watkins_max.csv");

/// The compiled-in h <= 7 list, re-verified like any other load. A failure
/// here means the built artifact is corrupt, so it panics rather than
/// returning an error.
pub fn bundled_discriminant_table() -> DiscriminantTable {
    let table = parse_discriminant_table(BUNDLED_DISCS).expect("bundled table parses");
    verify_rows(&table.rows).expect("bundled table verifies");
    table
}

pub fn bundled_max_table() -> MaxDiscTable {
    let table = parse_max_table(BUNDLED_MAX).expect("bundled max table parses");
    verify_rows(&table.rows).expect("bundled max table verifies");
    table
}

/// Canonical serialization: comment, header, sorted rows, newline
/// terminated. parse(to_csv(t)) == t exactly.
pub fn discriminant_table_to_csv(table: &DiscriminantTable) -> String {
    let mut out = format!(
        "# complete_through={}\nh,abs_d\n",
        table.declared_complete_through
    );
    for &(h, abs_d) in &table.rows {
        out.push_str(&format!("{h},{abs_d}\n"));
    }
    out
}

pub fn max_table_to_csv(table: &MaxDiscTable) -> String {
    let mut out = String::from("h,max_abs_d\n");
    for &(h, abs_d) in &table.rows {
        out.push_str(&format!("{h},{abs_d}\n"));
    }
    out
}

/// Enumerate every fundamental discriminant up to the scan limit, compute
/// all class numbers in one census sweep, and confirm that everything with
/// h <= declared_complete_through is listed. Omission is a data error.
pub fn verify_completeness(table: &DiscriminantTable, scan_limit: u64) -> Result<CompletenessReport> {
    let table_max = table.rows.iter().map(|&(_, d)| d).max().unwrap_or(0);
    if scan_limit < table_max {
        return Err(Error::domain(format!(
            "scan limit {scan_limit} is below the largest listed |d| = {table_max}"
        )));
    }
    let census = forms::class_number_census(scan_limit);
    let listed: std::collections::HashSet<(u64, u64)> = table.rows.iter().copied().collect();
    let mut missing = Vec::new();
    let mut fields_checked = 0u64;
    for k in 3..=scan_limit {
        if !matches!(k % 4, 0 | 3) {
            continue;
        }
        if !matches!(is_fundamental_discriminant(-(k as i64)), Ok(true)) {
            continue;
        }
        fields_checked += 1;
        let h = census[k as usize] as u64;
        if h <= table.declared_complete_through && !listed.contains(&(h, k)) {
            missing.push((h, k));
        }
    }
    if !missing.is_empty() {
        missing.sort_unstable();
        let shown: Vec<String> = missing
            .iter()
            .take(20)
            .map(|&(h, d)| format!("(h={h}, |d|={d})"))
            .collect();
        return Err(Error::data(format!(
            "table omits {} field(s) with h <= {}: {}",
            missing.len(),
            table.declared_complete_through,
            shown.join(", ")
        )));
    }
    Ok(CompletenessReport {
        scan_limit,
        complete_through: table.declared_complete_through,
        fields_checked,
        note: format!(
            "every fundamental |d| <= {scan_limit} with h <= {} is listed; completeness \
             beyond the scan limit rests on the published class number tables the data \
             files were generated from",
            table.declared_complete_through
        ),
    })
}

/// C(n) for n within the table's complete range: the larger of the largest
/// prime <= 3n+1 and the largest prime factor of any listed |d| with
/// h <= n. Ties prefer the discriminant witness.
pub fn exact_bound(n: u64, table: &DiscriminantTable) -> Result<BoundResult> {
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    if n > table.declared_complete_through {
        return Err(Error::domain(format!(
            "degree {n} exceeds table completeness (h <= {})",
            table.declared_complete_through
        )));
    }
    let small = largest_prime_at_most(3 * n + 1)?;
    let mut best: Option<(u64, u64, u64)> = None; // (prime, abs_d, h)
    for &(h, abs_d) in table.rows.iter().filter(|&&(h, _)| h <= n) {
        let p = largest_prime_factor(abs_d)?;
        if best.is_none_or(|(bp, _, _)| p > bp) {
            best = Some((p, abs_d, h));
        }
    }
    let (c_n, witness) = match best {
        Some((p, abs_d, h)) if p >= small => (p, Witness::DiscriminantFactor { prime: p, abs_d, h }),
        _ => (small, Witness::SmallPrimeClause { prime: small }),
    };
    Ok(BoundResult { n, c_n, witness, method: Method::Exact })
}

/// The rough bound for n <= 100: the largest prime not exceeding the
/// largest |d| with h <= n, against the same 3n+1 clause.
pub fn rough_bound(n: u64, maxtable: &MaxDiscTable) -> Result<BoundResult> {
    if !(1..=100).contains(&n) {
        return Err(Error::domain(format!("rough bound needs 1 <= n <= 100, got {n}")));
    }
    let small = largest_prime_at_most(3 * n + 1)?;
    let mut best = (0u64, 0u64); // (max_abs_d, h)
    for &(h, abs_d) in maxtable.rows.iter().filter(|&&(h, _)| h <= n) {
        if abs_d > best.0 {
            best = (abs_d, h);
        }
    }
    let cap_prime = largest_prime_at_most(best.0)?;
    let (c_n, witness) = if cap_prime >= small {
        (
            cap_prime,
            Witness::DiscriminantCap { prime: cap_prime, max_abs_d: best.0, h: best.1 },
        )
    } else {
        (small, Witness::SmallPrimeClause { prime: small })
    };
    Ok(BoundResult { n, c_n, witness, method: Method::Rough })
}

/// exact_bound for every degree 1..=n_max.
pub fn bound_table(n_max: u64, table: &DiscriminantTable) -> Result<Vec<BoundResult>> {
    (1..=n_max).map(|n| exact_bound(n, table)).collect()
}
