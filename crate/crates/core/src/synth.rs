//! Synthetic rank lists.

use crate::empirical::{GroupKey, RankList};
use crate::error::{Error, Result};
use crate::pareto::ParetoParams;

fn require_nonzero(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            domain: "n >= 1",
        });
    }
    Ok(())
}

/// `n` i.i.d. Pareto draws, sorted descending.
pub fn generate_ranklist(
    params: ParetoParams,
    n: usize,
    seed: u64,
    key: GroupKey,
) -> Result<RankList> {
    require_nonzero(n)?;
    RankList::from_values(key, params.sample(n, seed))
}

/// Noise-free list `m_r = m0 (n/r)^(1/alpha)`, so that `ccdf(m_r) = r/n`.
pub fn generate_exact_ranksize(params: ParetoParams, n: usize, key: GroupKey) -> Result<RankList> {
    require_nonzero(n)?;
    let inv_alpha = 1.0 / params.alpha();
    let values = (1..=n)
        .map(|r| params.m0() * (n as f64 / r as f64).powf(inv_alpha))
        .collect();
    RankList::from_sorted(key, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::empirical::Kind;

    fn key() -> GroupKey {
        GroupKey::new("synthetic", 2013, Kind::Income)
    }

    #[test]
    fn exact_examples() {
        let l = generate_exact_ranksize(ParetoParams::new(1.0, 2.0).unwrap(), 100, key()).unwrap();
        assert_eq!(l.values()[0], 10.0);
        assert_eq!(l.values()[99], 1.0);
        let l = generate_exact_ranksize(ParetoParams::new(1.0, 1.0).unwrap(), 4, key()).unwrap();
        assert_eq!(l.values(), &[4.0, 2.0, 4.0 / 3.0, 1.0]);
    }

    #[test]
    fn stochastic_examples() {
        let p = ParetoParams::new(2.0, 1.5).unwrap();
        let l = generate_ranklist(p, 1, 9, key()).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.values()[0] >= 2.0);
        assert_eq!(
            generate_ranklist(p, 50, 11, key()).unwrap(),
            generate_ranklist(p, 50, 11, key()).unwrap()
        );
        assert!(generate_ranklist(p, 0, 11, key()).is_err());
        assert!(generate_exact_ranksize(p, 0, key()).is_err());
    }
}
