mod common;

use corrnet::{correlation, generate_panel, log_returns, MarketSpec};

fn pair_means(spec: &MarketSpec) -> (Vec<f64>, Vec<f64>) {
    let panel = generate_panel(spec).unwrap();
    let rho = correlation(&log_returns(&panel, 1).unwrap()).unwrap();
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for i in 0..spec.n_stocks {
        for j in i + 1..spec.n_stocks {
            if spec.sector_of(i) == spec.sector_of(j) {
                intra.push(rho.get(i, j));
            } else {
                inter.push(rho.get(i, j));
            }
        }
    }
    (intra, inter)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn independent_columns_are_uncorrelated() {
    let spec = MarketSpec { n_stocks: 40, n_sectors: 4, days: 500, beta: 0.0, gamma: 0.0, ..Default::default() };
    let (intra, inter) = pair_means(&spec);
    let all: Vec<f64> = intra.iter().chain(&inter).map(|r| r.abs()).collect();
    assert!(mean(&all) < 3.0 / (spec.days as f64).sqrt());
}

#[test]
fn sector_correlations_match_the_model() {
    // Pairwise correlations share factors, so the spread is taken across
    // seeds rather than across pairs.
    let base = MarketSpec { n_stocks: 60, n_sectors: 6, days: 500, beta: 0.0, gamma: 0.6, ..Default::default() };
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for seed in 0..10 {
        let (a, b) = pair_means(&base.clone().with_seed(seed));
        intra.push(mean(&a));
        inter.push(mean(&b));
    }
    let se = |v: &[f64]| {
        let m = mean(v);
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64 / v.len() as f64).sqrt()
    };
    assert!(mean(&intra) > mean(&inter));
    assert!((mean(&intra) - base.expected_intra_correlation()).abs() <= 3.0 * se(&intra), "{intra:?}");
    assert!((mean(&inter) - base.expected_inter_correlation()).abs() <= 3.0 * se(&inter), "{inter:?}");
}

#[test]
fn log_returns_invert_the_price_construction() {
    let spec = MarketSpec { n_stocks: 5, n_sectors: 5, days: 300, ..Default::default() };
    let panel = generate_panel(&spec).unwrap();
    let r = log_returns(&panel, 1).unwrap();
    let total: f64 = r.column(2).iter().sum();
    assert!((total - (panel.price(299, 2) / 100.0).ln()).abs() <= 1e-9);
}
