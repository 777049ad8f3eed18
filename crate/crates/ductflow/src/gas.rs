//! Background gas state and the density map ρ = H(B, K, |u|²).

use crate::error::{Error, Result};
use crate::num::Scalar;

/// Uniform background (ρ̄, ū, K̄, γ) with 0 < M̄² < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasState<F> {
    pub rho: F,
    pub u: F,
    /// Entropy coefficient K̄ in the state equation P = K ρ^γ.
    pub k: F,
    pub gamma: F,
}

impl<F: Scalar> GasState<F> {
    pub fn new(rho: F, u: F, k: F, gamma: F) -> Result<Self> {
        if !(rho > F::zero() && u > F::zero() && k > F::zero()) {
            return Err(Error::Config(
                "background density, velocity and entropy coefficient must be positive".into(),
            ));
        }
        if !(gamma > F::one()) {
            return Err(Error::Config("adiabatic exponent must exceed 1".into()));
        }
        let gas = Self { rho, u, k, gamma };
        let m2 = gas.mach_sq();
        if !(m2 < F::one()) {
            return Err(Error::Config(format!(
                "subsonic condition violated: background Mach² = {:.4} ≥ 1",
                m2.as_f64()
            )));
        }
        Ok(gas)
    }

    /// c̄² = γ K̄ ρ̄^{γ−1}.
    pub fn sound_speed_sq(&self) -> F {
        self.gamma * self.k * self.rho.powf(self.gamma - F::one())
    }

    /// M̄² = ū²/c̄².
    pub fn mach_sq(&self) -> F {
        self.u * self.u / self.sound_speed_sq()
    }

    /// B̄ = ū²/2 + γK̄ρ̄^{γ−1}/(γ−1).
    pub fn bernoulli(&self) -> F {
        self.u * self.u * F::cst(0.5) + self.sound_speed_sq() / (self.gamma - F::one())
    }

    /// 1 − M̄², the axial ellipticity factor.
    pub fn one_minus_mach_sq(&self) -> F {
        F::one() - self.mach_sq()
    }
}

/// Result of the density map at one point.
#[derive(Debug, Clone, Copy)]
pub struct DensityEval<F> {
    pub density: F,
    pub sound_speed_sq: F,
    pub mach_sq: F,
}

/// ρ = H(B, K, |u|²) = ((γ−1)/(γK) · (B − |u|²/2))^{1/(γ−1)}, together with
/// the local sound speed and Mach number.
pub fn density_map<F: Scalar>(
    bernoulli: F,
    entropy: F,
    speed_sq: F,
    gas: &GasState<F>,
) -> Result<DensityEval<F>> {
    let arg = bernoulli - speed_sq * F::cst(0.5);
    if !(arg > F::zero()) || !(entropy > F::zero()) {
        return Err(Error::Admissibility(format!(
            "density map argument non-positive (B − |u|²/2 = {:.4e}, K = {:.4e})",
            arg.as_f64(),
            entropy.as_f64()
        )));
    }
    let gm1 = gas.gamma - F::one();
    let density = (gm1 / (gas.gamma * entropy) * arg).powf(F::one() / gm1);
    let sound_speed_sq = gm1 * arg;
    Ok(DensityEval {
        density,
        sound_speed_sq,
        mach_sq: speed_sq / sound_speed_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasState<f64> {
        GasState::new(1.0, 0.5, 1.0, 1.4).unwrap()
    }

    #[test]
    fn background_constants() {
        let g = gas();
        // B̄ = 0.125 + 3.5 = 3.625, c̄² = 1.4, M̄² = 0.25/1.4
        assert!((g.bernoulli() - 3.625).abs() < 1e-14);
        assert!((g.sound_speed_sq() - 1.4).abs() < 1e-14);
        assert!((g.mach_sq() - 0.17857142857142858).abs() < 1e-15);
    }

    #[test]
    fn background_roundtrip() {
        let g = gas();
        let eval = density_map(g.bernoulli(), g.k, g.u * g.u, &g).unwrap();
        assert!((eval.density - 1.0).abs() < 1e-14);
        assert!((eval.sound_speed_sq - 1.4).abs() < 1e-14);
        assert!((eval.mach_sq - g.mach_sq()).abs() < 1e-14);
    }

    #[test]
    fn doubling_entropy_scales_density() {
        let g = gas();
        let a = density_map(3.625, 1.0, 0.25, &g).unwrap();
        let b = density_map(3.625, 2.0, 0.25, &g).unwrap();
        let expect = a.density * 2.0f64.powf(-1.0 / 0.4);
        assert!((b.density - expect).abs() < 1e-14);
    }

    #[test]
    fn inverse_roundtrip_on_pseudorandom_triples() {
        let g = gas();
        let mut state = 7u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for _ in 0..50 {
            let b = 3.625 + rnd();
            let k = 1.0 + 0.5 * rnd();
            let q = 0.25 * (1.0 + rnd().abs());
            let eval = density_map(b, k, q, &g).unwrap();
            // invert: B = q/2 + gamma K rho^{gamma-1} / (gamma-1)
            let back =
                q / 2.0 + g.gamma * k * eval.density.powf(g.gamma - 1.0) / (g.gamma - 1.0);
            assert!((back - b).abs() < 1e-12, "{back} vs {b}");
        }
    }

    #[test]
    fn guards() {
        let g = gas();
        assert!(density_map(0.1, 1.0, 0.15, &g).is_ok());
        assert!(density_map(0.1, 1.0, 0.3, &g).is_err()); // B - q/2 < 0
        assert!(density_map(3.0, -1.0, 0.25, &g).is_err());
        assert!(GasState::new(1.0, 1.3, 1.0, 1.4).is_err()); // supersonic
        assert!(GasState::new(1.0, 0.5, 1.0, 0.9).is_err());
        assert!(GasState::new(-1.0, 0.5, 1.0, 1.4).is_err());
    }
}
