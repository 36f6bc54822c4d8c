pub mod ode;
pub mod quadrature;
pub mod tridiag;

/// Richardson extrapolation of a quantity with an `h²` leading error,
/// given values at steps `h_coarse` and `h_fine`.
pub fn richardson_h2(coarse: f64, fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    let r2 = (h_coarse / h_fine).powi(2);
    (r2 * fine - coarse) / (r2 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_removes_quadratic_term() {
        let exact = 3.0;
        let value = |h: f64| exact + 0.7 * h * h;
        let r = richardson_h2(value(0.1), value(0.1 / 2.05), 0.1, 0.1 / 2.05);
        assert!((r - exact).abs() < 1e-14);
    }
}
