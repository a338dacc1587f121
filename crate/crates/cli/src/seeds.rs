use crate::error::{CliError, CliResult};

/// Parses `N`, `A..B` or `A..=B`; both range forms include `B`.
pub fn parse_seeds(text: &str) -> CliResult<Vec<u64>> {
    let bad = || {
        CliError::Usage(format!(
            "bad seed range {text:?}, expected N, A..B or A..=B"
        ))
    };
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        None => {
            let n = num(text)?;
            (n, n)
        }
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Parses `A..B`, `A..=B` or `A` into an inclusive range of garage counts.
pub fn parse_m_range(text: &str) -> CliResult<std::ops::RangeInclusive<usize>> {
    let seeds = parse_seeds(text)?;
    let (lo, hi) = (
        seeds[0] as usize,
        *seeds.last().expect("non-empty") as usize,
    );
    if lo == 0 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    Ok(lo..=hi)
}
