mod common;

use refcast::sarima::{auto_sarima, fit_sarima, forecast_sarima, ndiffs, SarimaOrder};
use refcast::series::acf;

use common::{arma11, monthly, normals, sarima_100_011};

#[test]
fn arma11_parameters_are_recovered() {
    let (phi, theta) = (0.5, 0.3);
    for seed in [11, 12, 13] {
        let ts = monthly((1930, 1), arma11(seed, 1000, phi, theta));
        let fit = fit_sarima(&ts, &SarimaOrder::non_seasonal(1, 0, 1)).unwrap();
        let c = &fit.coefficients;
        assert!((c.ar[0] - phi).abs() < 0.08, "seed {seed}: ar {}", c.ar[0]);
        assert!((c.ma[0] - theta).abs() < 0.08, "seed {seed}: ma {}", c.ma[0]);
        assert!((fit.sigma2 - 1.0).abs() < 0.15, "seed {seed}: sigma2 {}", fit.sigma2);
        assert!(c.mean.unwrap().abs() < 0.3);
    }
}

#[test]
fn random_walk_needs_one_difference() {
    for seed in 0..5 {
        let mut level = 0.0;
        let walk: Vec<f64> = normals(100 + seed, 500).into_iter().map(|e| { level += e; level }).collect();
        assert_eq!(ndiffs(&monthly((1980, 1), walk)).unwrap(), 1, "seed {seed}");
    }
}

fn order_distance(o: &SarimaOrder, truth: &SarimaOrder) -> usize {
    o.p.abs_diff(truth.p)
        + o.d.abs_diff(truth.d)
        + o.q.abs_diff(truth.q)
        + o.sp.abs_diff(truth.sp)
        + o.sd.abs_diff(truth.sd)
        + o.sq.abs_diff(truth.sq)
}

#[test]
fn stepwise_search_lands_near_the_generating_order() {
    let truth = SarimaOrder::new((1, 0, 0), (0, 1, 1), 12).unwrap();
    let seeds = 50u64;
    let mut near = 0;
    let mut chosen = Vec::new();
    for seed in 0..seeds {
        let ts = monthly((1980, 1), sarima_100_011(seed, 480, 0.6, -0.5));
        let order = auto_sarima(&ts).unwrap().order;
        if order_distance(&order, &truth) <= 1 {
            near += 1;
        }
        chosen.push(order.to_string());
    }
    let rate = near as f64 / seeds as f64;
    assert!(rate >= 0.8, "only {near}/{seeds} within one step: {chosen:?}");
}

#[test]
fn fitted_model_forecast_residuals_are_white() {
    let ts = monthly((1980, 1), sarima_100_011(7, 360, 0.6, -0.5));
    let order = SarimaOrder::new((1, 0, 0), (0, 1, 1), 12).unwrap();
    let fit = fit_sarima(&ts, &order).unwrap();
    assert!((fit.coefficients.ar[0] - 0.6).abs() < 0.1);
    assert!((fit.coefficients.sma[0] + 0.5).abs() < 0.15);
    let r = acf(&fit.residuals, 24).unwrap();
    let band = 2.0 / (fit.residuals.len() as f64).sqrt();
    assert!(r.iter().filter(|v| v.abs() > band).count() <= 3);

    let fc = forecast_sarima(&fit, 36, &[0.8, 0.95]).unwrap();
    assert!(fc.is_consistent());
    let widths: Vec<f64> = (0..36).map(|h| fc.intervals[1].upper[h] - fc.intervals[1].lower[h]).collect();
    assert!(widths.windows(2).all(|w| w[1] >= w[0] - 1e-9));
}
