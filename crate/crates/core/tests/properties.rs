use proptest::prelude::*;
use tailfit::aggregate::ExponentRow;
use tailfit::{
    fit_hill, fit_rank_regression, generate_exact_ranksize, generate_ranklist, ExponentTable,
    GroupKey, Kind, ParetoParams, RankList,
};

fn key() -> GroupKey {
    GroupKey::new("p", 2012, Kind::Wealth)
}

fn values_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1e6, 1..60)
}

fn reference_rows() -> Vec<(GroupKey, ExponentRow)> {
    ExponentTable::reference().iter().map(|(k, r)| (k.clone(), *r)).collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn rank_list_invariants(raw in values_strategy()) {
        let l = RankList::from_values(key(), raw.clone()).unwrap();
        prop_assert_eq!(l.len(), raw.len());
        prop_assert!(l.values().windows(2).all(|w| w[0] >= w[1]));
        let c = l.empirical_ccdf();
        prop_assert_eq!(c.points.last().unwrap().probability, 1.0);
        prop_assert!(c.points.windows(2).all(|w| w[0].value > w[1].value && w[0].probability < w[1].probability));
    }

    #[test]
    fn plot_points_ignore_input_order(mut raw in values_strategy(), rot in 0usize..60) {
        let a = RankList::from_values(key(), raw.clone()).unwrap().plot_points();
        let k = rot % raw.len();
        raw.rotate_left(k);
        raw.reverse();
        prop_assert_eq!(a, RankList::from_values(key(), raw).unwrap().plot_points());
    }

    #[test]
    fn truncate_then_ccdf_uses_k(raw in values_strategy(), k in 1usize..80) {
        let l = RankList::from_values(key(), raw.clone()).unwrap().truncate_top(k).unwrap();
        prop_assert_eq!(l.len(), k.min(raw.len()));
        prop_assert_eq!(l.empirical_ccdf().n, l.len());
    }

    #[test]
    fn fits_are_scale_invariant(seed in any::<u64>(), alpha in 0.8f64..3.5, c in prop::sample::select(vec![1e-3, 0.37, 1.0, 42.0, 1e6])) {
        let p = ParetoParams::new(1.0, alpha).unwrap();
        let l = generate_ranklist(p, 50, seed, key()).unwrap();
        let scaled = RankList::from_values(key(), l.values().iter().map(|v| v * c).collect()).unwrap();
        let (a, b) = (fit_rank_regression(&l).unwrap(), fit_rank_regression(&scaled).unwrap());
        prop_assert!(rel_close(a.alpha, b.alpha, 1e-10));
        prop_assert!(rel_close(a.alpha_rank, b.alpha_rank, 1e-10));
        prop_assert!(rel_close(a.stderr_alpha, b.stderr_alpha, 1e-10));
        prop_assert!((a.r_squared - b.r_squared).abs() < 1e-10);
        prop_assert!((b.intercept - a.intercept - c.ln()).abs() < 1e-9);
        let m = l.values()[l.len() - 1];
        let (h1, h2) = (fit_hill(&l, Some(m)).unwrap(), fit_hill(&scaled, Some(m * c)).unwrap());
        prop_assert!(rel_close(h1.alpha_hat, h2.alpha_hat, 1e-10));
    }

    #[test]
    fn rank_fit_invariants(seed in any::<u64>(), alpha in 0.5f64..4.0, n in 2usize..200) {
        let l = generate_ranklist(ParetoParams::new(2.0, alpha).unwrap(), n, seed, key()).unwrap();
        if let Ok(f) = fit_rank_regression(&l) {
            prop_assert!((f.alpha * f.alpha_rank - 1.0).abs() < 1e-12);
            prop_assert!(f.stderr_alpha >= 0.0);
            prop_assert!((0.0..=1.0).contains(&f.r_squared));
            prop_assert_eq!(f.n_points, n);
        }
    }

    #[test]
    fn exact_sequences_have_zero_stderr(alpha in 0.5f64..4.0, n in 3usize..300) {
        let f = fit_rank_regression(&generate_exact_ranksize(ParetoParams::new(1.0, alpha).unwrap(), n, key()).unwrap()).unwrap();
        prop_assert!((f.r_squared - 1.0).abs() < 1e-12);
        prop_assert!(f.stderr_alpha < 1e-12);
    }

    #[test]
    fn summaries_ignore_row_order(perm in Just(reference_rows()).prop_shuffle()) {
        let mut t = ExponentTable::new();
        for (k, r) in perm {
            t.insert(k, r).unwrap();
        }
        let reference = ExponentTable::reference();
        for y in 2010..2014 {
            for kind in [Kind::Income, Kind::Wealth] {
                prop_assert_eq!(t.summarize_regions(y, kind).unwrap(), reference.summarize_regions(y, kind).unwrap());
            }
        }
    }
}

#[test]
fn population_sd_identity() {
    let t = ExponentTable::reference();
    for y in 2010..2014 {
        for kind in [Kind::Income, Kind::Wealth] {
            let s = t.summarize_regions(y, kind).unwrap();
            let ss: f64 = t
                .iter()
                .filter(|(k, _)| k.year == y && k.kind == kind && k.region != "NORWAY")
                .map(|(_, r)| (r.alpha - s.mean).powi(2))
                .sum();
            assert!((s.dispersion * s.dispersion * s.n as f64 - ss).abs() < 1e-12);
        }
    }
}

#[test]
fn reference_csv_round_trip() {
    let t = ExponentTable::reference();
    let mut buf = Vec::new();
    t.to_csv_writer(&mut buf).unwrap();
    let back = ExponentTable::from_csv_reader(buf.as_slice()).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.regions(), t.regions());
    assert!(back.regions().contains("Østfold"));
    assert!(back.regions().contains("Sør Trøndelag"));
    assert_eq!(back.regions().len(), 20);
    assert_eq!(back.years(), t.years());
}
