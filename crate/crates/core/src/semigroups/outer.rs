use serde::{Deserialize, Serialize};

use crate::poly::roots_in_disk;
use crate::symbols::{Analytic, RationalOuter};
use crate::{Error, Result, C64};

/// `F^t = exp(t·Log F)` on the branch fixed by the principal logarithm at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterPower {
    pub outer: RationalOuter,
    pub t: f64,
}

impl OuterPower {
    pub fn new(outer: RationalOuter, t: f64) -> Result<Self> {
        check_branch(&outer)?;
        Ok(Self { outer, t })
    }
}

impl Analytic for OuterPower {
    fn eval(&self, z: C64) -> C64 {
        if self.t == 0.0 {
            return C64::new(1.0, 0.0);
        }
        (self.outer.log_branch(z) * self.t).exp()
    }

    fn describe(&self) -> String {
        format!("({})^{}", self.outer.describe(), self.t)
    }
}

fn check_branch(f: &RationalOuter) -> Result<()> {
    if f.eval(C64::new(0.0, 0.0)).norm() == 0.0 {
        return Err(Error::BranchFailure("F(0) = 0".into()));
    }
    let p = f.as_polynomial();
    if p.degree().unwrap_or(0) > 0 {
        let rs = p.roots()?;
        if let Some(r) = roots_in_disk(&rs, 1e-12).inside.first() {
            return Err(Error::BranchFailure(format!("F vanishes at {} inside the disc", r.value)));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterFlowValue {
    pub coeffs: Vec<C64>,
    pub symbol: OuterPower,
}

/// Taylor coefficients of `F^t` from the series recurrences
/// `F·G′ = F′` (for `G = Log F`) and `E′ = t·G′·E` (for `E = exp(tG)`).
pub fn outer_flow(f: &RationalOuter, t: f64, n: usize) -> Result<OuterFlowValue> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::DomainError(format!("time {t} must be a nonnegative real")));
    }
    let symbol = OuterPower::new(f.clone(), t)?;
    let zero = C64::new(0.0, 0.0);
    let mut fc = f.as_polynomial().coeffs().to_vec();
    fc.resize(n.max(fc.len()), zero);

    let mut g = vec![zero; n];
    if n == 0 {
        return Ok(OuterFlowValue { coeffs: Vec::new(), symbol });
    }
    g[0] = fc[0].ln();
    for k in 1..n {
        let mut acc = fc[k] * k as f64;
        for j in 1..k {
            acc -= g[j] * fc[k - j] * j as f64;
        }
        g[k] = acc / (fc[0] * k as f64);
    }

    let mut e = vec![zero; n];
    e[0] = (g[0] * t).exp();
    for k in 1..n {
        let mut acc = zero;
        for j in 1..=k {
            acc += g[j] * e[k - j] * j as f64;
        }
        e[k] = acc * (t / k as f64);
    }
    Ok(OuterFlowValue { coeffs: e, symbol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::symbols::{taylor_coefficients, TaylorOptions};

    fn z_minus_two() -> RationalOuter {
        RationalOuter::new(c(1.0, 0.0), vec![], vec![c(2.0, 0.0)]).unwrap()
    }

    #[test]
    fn constant_power() {
        let f = RationalOuter::constant(c(2.0, 0.0)).unwrap();
        let v = outer_flow(&f, 0.7, 4).unwrap();
        assert!((v.coeffs[0] - c(2f64.powf(0.7), 0.0)).norm() < 1e-15);
        assert!(v.coeffs[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn time_one_recovers_f() {
        let v = outer_flow(&z_minus_two(), 1.0, 32).unwrap();
        assert!((v.coeffs[0] + c(2.0, 0.0)).norm() < 1e-10);
        assert!((v.coeffs[1] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(v.coeffs[2..].iter().all(|x| x.norm() < 1e-10));
    }

    #[test]
    fn half_power_principal_branch() {
        let v = outer_flow(&z_minus_two(), 0.5, 8).unwrap();
        assert!((v.coeffs[0] - c(0.0, 2f64.sqrt())).norm() < 1e-14);
        assert!((v.symbol.eval(c(0.0, 0.0)) - c(0.0, 2f64.sqrt())).norm() < 1e-14);
    }

    #[test]
    fn recurrence_matches_fft_of_branch() {
        let f = RationalOuter::new(c(-1.0, 0.5), vec![c(0.6, 0.3)], vec![c(1.5, -0.2), c(0.0, 1.0)]).unwrap();
        let v = outer_flow(&f, 0.37, 24).unwrap();
        let fft = taylor_coefficients(&v.symbol, 24, &TaylorOptions::default()).unwrap();
        for k in 0..24 {
            assert!((v.coeffs[k] - fft.coeffs[k]).norm() < 1e-9);
        }
    }
}
