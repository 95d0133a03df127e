use super::*;
use crate::builder::{build, LRule, NRule};
use crate::seedpoly::{HeadParams, PolySpec};
use std::f64::consts::LN_2;
use std::sync::OnceLock;

fn head() -> (PolySpec, HeadParams) {
    let spec = PolySpec::default_seed();
    let head = HeadParams::new(&spec, 10.0, 4, 4096).unwrap();
    (spec, head)
}

fn with_rule(rule: SequenceRule, depth: usize) -> Construction {
    let (spec, head) = head();
    build(&spec, &head, &rule, depth, 4096).unwrap()
}

fn default_build() -> &'static Construction {
    static C: OnceLock<Construction> = OnceLock::new();
    C.get_or_init(|| with_rule(SequenceRule::default(), 5))
}

fn all_pass(results: &[CheckResult]) {
    for r in results {
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }
}

#[test]
fn ladder_passes_on_default() {
    let r = check_ladder(default_build());
    assert!(r.len() >= 5 * 4);
    all_pass(&r);
    for u in r.iter().filter(|r| r.name == "ladder_upper_product") {
        assert!(u.margin_log > 0.0);
    }
}

#[test]
fn halved_radius_breaks_growth() {
    // halving log R_3 still leaves R_3 far above R_2^2, so only the
    // closed-form lower bounds notice
    let mut c = default_build().clone();
    c.levels[2].log_r /= 2.0;
    let r = check_ladder(&c);
    let find = |name: &str| r.iter().find(|x| x.name == name && x.level == Some(2)).unwrap().verdict;
    assert_eq!(find("ladder_growth"), Verdict::Pass);
    assert_eq!(find("ladder_lower_half_power"), Verdict::Fail);
    assert_eq!(find("ladder_lower_product"), Verdict::Fail);

    let mut c = default_build().clone();
    c.levels[2].log_r = 1.5 * c.levels[1].log_r;
    let r = check_ladder(&c);
    let growth_2 = r.iter().find(|x| x.name == "ladder_growth" && x.level == Some(2)).unwrap();
    assert_eq!(growth_2.verdict, Verdict::Fail);
}

#[test]
fn annulus_maps_pass_and_cover() {
    let r = check_annulus_maps(default_build(), 4096);
    all_pass(&r);
    for k in 1..=3 {
        for name in ["inner_v_circle", "outer_v_circle", "inner_a_circle", "outer_a_circle", "v_covers_next_a"] {
            let x = r.iter().find(|x| x.name == name && x.level == Some(k)).unwrap();
            assert!(x.margin_log > 0.0);
        }
    }
}

#[test]
fn annulus_margins_stable_under_refinement() {
    let c = default_build();
    let coarse = check_annulus_maps(c, 1024);
    let fine = check_annulus_maps(c, 4096);
    for (a, b) in coarse.iter().zip(&fine) {
        let k = a.level.unwrap();
        let tail = 8.0 * (-c.levels[k - 1].log_r).exp();
        assert!(a.margin_log - b.margin_log <= tail, "{a:?} {b:?}");
    }
}

#[test]
fn annulus_check_is_partial_at_ledger_edge() {
    let c = with_rule(SequenceRule::default(), 2);
    let r = check_annulus_maps(&c, 1024);
    let outer = r.iter().find(|x| x.name == "outer_v_circle" && x.level == Some(2)).unwrap();
    assert!(outer.reason.as_deref().unwrap().starts_with("partial"));
    assert_eq!(outer.verdict, Verdict::Pass);
}

#[test]
fn b_invariance_passes_and_identity_fails() {
    let c = default_build();
    let r = check_b_invariance(c, 1000, crate::rng::DEFAULT_SEED);
    assert_eq!(r.len(), 4);
    all_pass(&r);
    let id = check_b_invariance_with(c, &Identity, 1000, crate::rng::DEFAULT_SEED);
    assert!(id.iter().all(|r| r.verdict == Verdict::Fail));
}

#[test]
fn julia_localization_passes_and_respects_exclusions() {
    let c = default_build();
    let r = check_julia_localization(c, 4096, crate::rng::DEFAULT_SEED);
    all_pass(&r);
    let level = &c.levels[0];
    let n = level.n.as_f64();
    for z in localization_points(level, 4096, 3) {
        let t = (z.log_abs() - level.log_r).exp();
        assert!(!(1.0 - 1.0 / n..=1.0 + 2.0 / n).contains(&t));
        assert!(!(1.5..=2.5).contains(&t));
        assert!((0.25 - 1e-12..=4.0 + 1e-12).contains(&t));
    }
}

#[test]
fn min_modulus_bound() {
    let c = default_build();
    let r = check_min_modulus(c, 4096);
    all_pass(&r);
    for x in &r {
        let k = x.level.unwrap();
        // min over the circle never exceeds the max, which is R_{k+1}
        if let Some(next) = c.log_r(k + 1) {
            assert!(x.rhs_log <= next);
        }
    }
    assert!(r.windows(2).all(|w| w[1].margin_log > w[0].margin_log));
    let maxlog = with_rule(SequenceRule { n: NRule::Constant { c: 8 }, l: LRule::MaxLog }, 2);
    assert!(check_min_modulus(&maxlog, 4096).is_empty());
}

#[test]
fn growth_signatures() {
    let power = with_rule(SequenceRule { n: NRule::Power { s: 0.5 }, l: LRule::One }, 6);
    let rows = growth_order(&power).unwrap();
    assert!(rows.iter().filter(|r| r.k >= 2).all(|r| r.rho_lower >= 0.45));

    let constant = with_rule(SequenceRule::default(), 6);
    let hats: Vec<f64> = growth_order(&constant).unwrap().iter().filter_map(|r| r.rho_hat).collect();
    assert!(hats.windows(2).all(|w| w[1] < w[0]));

    let tower = with_rule(SequenceRule { n: NRule::Tower, l: LRule::One }, 6);
    let lows: Vec<f64> = growth_order(&tower).unwrap().iter().map(|r| r.rho_lower).collect();
    assert!(lows.len() >= 3);
    assert!(lows.windows(2).all(|w| w[1] > w[0]));

    for c in [&power, &constant, &tower] {
        assert!(liminf_criterion(c).unwrap().iter().all(|&x| x >= 1.0));
    }
}

#[test]
fn growth_needs_three_levels() {
    let c = with_rule(SequenceRule::default(), 2);
    assert_eq!(growth_order(&c), Err(GrowthError::ShallowLedger(2)));
}

#[test]
fn growth_rows_are_ledger_arithmetic() {
    let c = default_build();
    let rows = growth_order(c).unwrap();
    for r in &rows {
        let next = c.log_r(r.k + 1).unwrap();
        assert_eq!(r.rho_hat.unwrap(), next.ln() / (LN_2 + r.log_r));
        assert!((r.rho_lower - (8.0 * LN_2).ln() / (LN_2 + r.log_r)).abs() < 1e-15);
    }
}

#[test]
fn linear_rule_liminf_ratios_increase() {
    let c = with_rule(SequenceRule { n: NRule::Power { s: 1.0 }, l: LRule::One }, 4);
    let ratios = liminf_criterion(&c).unwrap();
    assert!(ratios.len() >= 2);
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
}

#[test]
fn critical_bound_on_toy_level() {
    let c = default_build();
    let r = check_critical_h_bound(c, 1).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let pts = critical_points(c, 1).unwrap();
    assert!(!pts.is_empty() && pts.len() <= 8);
    // normal-form prediction: u^8 = 2 m / (m + n l) = 4/3, so |H| = 8/9; F_0
    // is only approximately a monomial, hence the loose tolerance
    for u in &pts {
        assert!((u.norm().powi(8) - 4.0 / 3.0).abs() < 1e-3);
    }
    assert!((r.rhs_log - (8.0f64 / 9.0).ln()).abs() < 1e-3);
}

#[test]
fn critical_bound_tracks_degree_balance_beyond_first_level() {
    // |1 - H| = ((m_{k-1} - n_k l_k) / (m_{k-1} + n_k l_k))^2 at the critical
    // points; with n = 8 this reaches 1/4 at k = 2 and exceeds it after
    let c = default_build();
    for k in 2..=4 {
        let m_prev = c.m_before(k).exact_value().unwrap() as f64;
        let w = 2.0 * m_prev / (m_prev + 8.0);
        let predicted = (w * (2.0 - w)).ln();
        let r = check_critical_h_bound(c, k).unwrap();
        assert!((r.rhs_log - predicted).abs() < 1e-6, "k={k}: {} vs {predicted}", r.rhs_log);
    }
    assert_eq!(check_critical_h_bound(c, 3).unwrap().verdict, Verdict::Fail);
    for k in 1..=4 {
        assert_eq!(check_critical_values(c, k).unwrap().verdict, Verdict::Pass);
    }
}

#[test]
fn critical_search_limits() {
    let power = with_rule(SequenceRule { n: NRule::Power { s: 0.5 }, l: LRule::One }, 3);
    assert_eq!(critical_points(&power, 2), Err(CriticalError::LogOnly));
    let big = with_rule(SequenceRule { n: NRule::Constant { c: 3000 }, l: LRule::One }, 1);
    assert_eq!(critical_points(&big, 1), Err(CriticalError::InfeasibleDegree(3016)));
}

#[test]
fn suite_is_clean_and_reproducible() {
    let c = default_build();
    let a = run_suite(c, &SuiteOptions::default());
    assert_eq!(a.failures().count(), 0, "{}", a.table());
    assert_eq!(a.skips().count(), 0);
    let b = run_suite(c, &SuiteOptions::default());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let back: Report = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back.results.len(), a.results.len());
    assert!(a.table().lines().count() == a.results.len() + 1);
}

#[test]
fn log_only_levels_are_skipped() {
    let power = with_rule(SequenceRule { n: NRule::Power { s: 0.5 }, l: LRule::One }, 4);
    let r = run_suite(&power, &SuiteOptions { samples: 1024, band_points: 100, ..Default::default() });
    assert!(r.skips().count() > 0);
    assert!(r.skips().all(|s| s.reason.is_some()));
}
