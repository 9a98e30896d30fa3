use crate::error::{Error, Result};

/// Least-squares slope of `log(err)` against `log(τ)`.
pub fn fit_order(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {}", pairs.len())));
    }
    if let Some(&(t, e)) = pairs.iter().find(|(t, e)| !(*t > 0.0 && *e > 0.0 && t.is_finite() && e.is_finite())) {
        return Err(Error::Fit(format!("non-positive or non-finite point ({t}, {e})")));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all step sizes are equal".into()));
    }
    Ok(sxy / sxx)
}
