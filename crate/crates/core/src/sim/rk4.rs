use crate::{Error, Result};

/// One classical fourth-order Runge–Kutta step of `x' = f(t, x)`.
///
/// Inputs that drive `f` are expected to be held constant over the step.
pub fn integrate_step<const N: usize, F>(mut deriv: F, x: &[f64; N], t: f64, h: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid("step", format!("must be finite and > 0, got {h}")));
    }
    let mut eval = |tt: f64, xx: &[f64; N]| -> Result<[f64; N]> {
        let d = deriv(tt, xx);
        if d.iter().all(|v| v.is_finite()) {
            Ok(d)
        } else {
            Err(Error::NumericFault {
                t: tt,
                detail: format!("non-finite derivative {d:?}"),
            })
        }
    };
    let axpy = |a: &[f64; N], s: f64, b: &[f64; N]| -> [f64; N] {
        let mut out = *a;
        for (o, bi) in out.iter_mut().zip(b) {
            *o += s * bi;
        }
        out
    };

    let k1 = eval(t, x)?;
    let k2 = eval(t + 0.5 * h, &axpy(x, 0.5 * h, &k1))?;
    let k3 = eval(t + 0.5 * h, &axpy(x, 0.5 * h, &k2))?;
    let k4 = eval(t + h, &axpy(x, h, &k3))?;

    let mut out = *x;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_state() {
        let x = integrate_step(|_, _| [0.0], &[5.0], 0.0, 0.1).unwrap();
        assert_eq!(x, [5.0]);
    }

    #[test]
    fn constant_derivative_is_exact() {
        let x = integrate_step(|_, _| [1.0], &[0.0], 0.0, 0.1).unwrap();
        assert!((x[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn exponential_decay() {
        let x = integrate_step(|_, x: &[f64; 1]| [-x[0]], &[1.0], 0.0, 0.1).unwrap();
        assert!((x[0] - 0.9048375).abs() < 1e-6);
        assert!((x[0] - (-0.1f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn fifth_order_local_error() {
        let err = |h: f64| {
            let x = integrate_step(|_, x: &[f64; 1]| [-x[0]], &[1.0], 0.0, h).unwrap();
            (x[0] - (-h).exp()).abs()
        };
        for h in [0.4, 0.2, 0.1] {
            let ratio = err(h) / err(h / 2.0);
            assert!(ratio >= 16.0 * 0.9, "h = {h}: ratio {ratio}");
        }
    }

    #[test]
    fn non_finite_derivative_reports_time() {
        let r = integrate_step(|_, _| [f64::NAN], &[0.0], 2.5, 0.1);
        match r {
            Err(Error::NumericFault { t, .. }) => assert_eq!(t, 2.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_step() {
        assert!(integrate_step(|_, _| [0.0], &[0.0], 0.0, 0.0).is_err());
        assert!(integrate_step(|_, _| [0.0], &[0.0], 0.0, -1.0).is_err());
    }
}
