use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the separation `eps` is obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scale {
    /// `eps = mu / 100`, `delta = eps / 10`.
    Thickness { mu: f64 },
    /// Direct `eps`, with `delta = eps / 10` unless overridden by a smaller value.
    Geometry { eps: f64, delta: Option<f64> },
}

/// Every constant tied to one choice of scale and flatness threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThickParams {
    pub mu: f64,
    pub eps: f64,
    pub delta: f64,
    /// Edge lower bound `eps - 2 delta`.
    pub a: f64,
    /// Edge upper bound `2 eps + 2 delta`.
    pub b: f64,
    /// Circumradius cap `eps + delta`.
    #[serde(rename = "R")]
    pub r: f64,
    /// Radius-edge bound `(eps + delta) / (eps - 2 delta)`.
    pub rho: f64,
    pub sigma: f64,
}

pub fn derive_params(scale: Scale, sigma: f64) -> Result<ThickParams> {
    let (mu, eps, delta) = match scale {
        Scale::Thickness { mu } => {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::BadParams(format!("mu must be positive, got {mu}")));
            }
            let eps = mu / 100.0;
            (mu, eps, eps / 10.0)
        }
        Scale::Geometry { eps, delta } => {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::BadParams(format!("eps must be positive, got {eps}")));
            }
            (100.0 * eps, eps, delta.unwrap_or(eps / 10.0))
        }
    };
    if !(delta > 0.0) || delta > eps / 10.0 * (1.0 + 1e-12) {
        return Err(Error::BadParams(format!("delta must lie in (0, eps/10], got {delta} for eps {eps}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::BadParams(format!("sigma must be positive, got {sigma}")));
    }
    let p = ThickParams {
        mu,
        eps,
        delta,
        a: eps - 2.0 * delta,
        b: 2.0 * eps + 2.0 * delta,
        r: eps + delta,
        rho: (eps + delta) / (eps - 2.0 * delta),
        sigma,
    };
    debug_assert!(p.a > 0.0 && p.a < p.b && p.r < p.b);
    Ok(p)
}

impl ThickParams {
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// Radius of the ball holding every vertex that can share a tetrahedron
    /// with a given vertex after both move: `b` plus one more `delta`.
    pub fn candidate_radius(&self) -> f64 {
        self.b + self.delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15 * b.abs().max(1e-300) * 8.0
    }

    #[test]
    fn thickness_scale_arithmetic() {
        let p = derive_params(Scale::Thickness { mu: 0.1 }, 0.01).unwrap();
        assert!(close(p.eps, 0.001));
        assert!(close(p.delta, 0.0001));
        assert!(close(p.a, 0.0008));
        assert!(close(p.b, 0.0022));
        assert!(close(p.r, 0.0011));
        assert!(close(p.rho, 1.375));
    }

    #[test]
    fn rho_is_scale_free() {
        for eps in [1e-5, 0.003, 0.2, 1.7] {
            let p = derive_params(Scale::Geometry { eps, delta: None }, 1.0).unwrap();
            assert!((p.rho - 1.375).abs() < 1e-14);
        }
    }

    #[test]
    fn geometry_mode_arithmetic() {
        let p = derive_params(Scale::Geometry { eps: 0.2, delta: None }, 1.0).unwrap();
        assert!(close(p.a, 0.16));
        assert!(close(p.b, 0.44));
        assert!(close(p.r, 0.22));
    }

    #[test]
    fn rejects_large_delta() {
        let r = derive_params(Scale::Geometry { eps: 0.2, delta: Some(0.03) }, 1.0);
        assert!(matches!(r, Err(Error::BadParams(_))));
        assert!(derive_params(Scale::Geometry { eps: 0.2, delta: Some(0.01) }, 1.0).is_ok());
        assert!(derive_params(Scale::Thickness { mu: -1.0 }, 1.0).is_err());
        assert!(derive_params(Scale::Thickness { mu: 0.1 }, 0.0).is_err());
    }
}
