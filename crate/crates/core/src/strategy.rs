//! Player strategies: classical gates, SU(2) from Euler angles, SU(3) from
//! eight angles, and Bloch-sphere coordinates of a qubit.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::num::{cis, expm_structured, gell_mann, r, CMatrix, Complex, ExpKind, I, ZERO};

/// Distance from a pole below which θ snaps to it.
const POLE_SNAP: f64 = 1e-12;

/// One player's SU(2) strategy (φ, α, θ).
///
/// At θ=0 the matrix does not depend on α and at θ=π it does not depend on φ;
/// the idle angle is stored as 0 so equal matrices compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAngles", into = "RawAngles")]
pub struct StrategyAngles {
    phi: f64,
    alpha: f64,
    theta: f64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct RawAngles {
    phi: f64,
    alpha: f64,
    theta: f64,
}

impl TryFrom<RawAngles> for StrategyAngles {
    type Error = Error;
    fn try_from(raw: RawAngles) -> Result<Self> {
        Self::new(raw.phi, raw.alpha, raw.theta)
    }
}

impl From<StrategyAngles> for RawAngles {
    fn from(g: StrategyAngles) -> Self {
        Self {
            phi: g.phi,
            alpha: g.alpha,
            theta: g.theta,
        }
    }
}

impl StrategyAngles {
    pub fn new(phi: f64, alpha: f64, theta: f64) -> Result<Self> {
        check_range("phi", phi, 0.0, TAU)?;
        check_range("alpha", alpha, 0.0, TAU)?;
        check_range("theta", theta, 0.0, PI)?;
        Ok(Self::canonical(phi, alpha, theta))
    }

    /// Reduce φ, α modulo 2π into [0, 2π) and clamp θ into [0, π].
    pub fn wrapped(phi: f64, alpha: f64, theta: f64) -> Self {
        Self::canonical(wrap(phi), wrap(alpha), theta.clamp(0.0, PI))
    }

    fn canonical(phi: f64, alpha: f64, theta: f64) -> Self {
        if theta <= POLE_SNAP {
            Self {
                phi,
                alpha: 0.0,
                theta: 0.0,
            }
        } else if theta >= PI - POLE_SNAP {
            Self {
                phi: 0.0,
                alpha,
                theta: PI,
            }
        } else {
            Self { phi, alpha, theta }
        }
    }

    /// U(0,0,0) = I, the classical "cooperate" gate.
    pub fn identity() -> Self {
        Self {
            phi: 0.0,
            alpha: 0.0,
            theta: 0.0,
        }
    }

    /// U(0,0,π) = Y, the classical "defect" gate.
    pub fn flip() -> Self {
        Self {
            phi: 0.0,
            alpha: 0.0,
            theta: PI,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::canonical(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI))
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.phi, self.alpha, self.theta]
    }

    pub fn matrix(&self) -> CMatrix {
        su2_from_angles(self)
    }

    /// True when U(self) = ±U(other) entrywise within `tol`. The sign is the
    /// center of SU(2) and drops out of every amplitude modulus.
    pub fn same_up_to_sign(&self, other: &Self, tol: f64) -> bool {
        let a = self.matrix();
        let b = other.matrix();
        let plus = a.max_abs_diff(&b).expect("2x2");
        let minus = a.max_abs_diff(&-&b).expect("2x2");
        plus <= tol || minus <= tol
    }
}

fn wrap(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid of a tiny negative rounds up to exactly 2π
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl fmt::Display for StrategyAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.phi, self.alpha, self.theta)
    }
}

impl FromStr for StrategyAngles {
    type Err = Error;

    /// Parses "φ,α,θ" in radians.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Invalid {
                what: "angle triple",
                reason: format!("expected `phi,alpha,theta`, got `{s}`"),
            });
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| Error::Invalid {
                what: "angle triple",
                reason: format!("`{part}` is not a number"),
            })?;
        }
        Self::new(v[0], v[1], v[2])
    }
}

/// [[e^{iφ}cos(θ/2), e^{iα}sin(θ/2)], [−e^{−iα}sin(θ/2), e^{−iφ}cos(θ/2)]]
pub fn su2_from_angles(g: &StrategyAngles) -> CMatrix {
    let (s, c) = (g.theta / 2.0).sin_cos();
    let data = vec![cis(g.phi) * c, cis(g.alpha) * s, -cis(-g.alpha) * s, cis(-g.phi) * c];
    CMatrix::new(2, 2, data).expect("2x2")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicalGate {
    I,
    Y,
}

pub fn classical_gate(which: ClassicalGate) -> CMatrix {
    match which {
        ClassicalGate::I => CMatrix::identity(2),
        ClassicalGate::Y => CMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).expect("2x2"),
    }
}

/// Point on the unit sphere for the qubit a|0⟩ + b|1⟩, after rotating away
/// the global phase so that a is real and non-negative.
pub fn bloch_coords(a: Complex, b: Complex) -> Result<[f64; 3]> {
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm_sqr: n });
    }
    let theta = 2.0 * b.norm().atan2(a.norm());
    let phi = if a == ZERO {
        0.0
    } else {
        (b * (a.conj() / a.norm())).arg()
    };
    let st = theta.sin();
    Ok([st * phi.cos(), st * phi.sin(), theta.cos()])
}

/// Eight Euler angles of an SU(3) element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su3Angles(pub [f64; 8]);

impl Su3Angles {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut a = [0.0; 8];
        for x in &mut a {
            *x = rng.gen_range(0.0..TAU);
        }
        Self(a)
    }
}

/// Generator sequence λ3 λ2 λ3 λ5 λ3 λ2 λ3 λ8 of the Euler product.
const SU3_GENERATORS: [usize; 8] = [3, 2, 3, 5, 3, 2, 3, 8];

/// U = Π_k exp(i α_k λ_{g(k)}), each factor by the collapsed power series.
pub fn su3_from_angles(g: &Su3Angles) -> CMatrix {
    let mut u = CMatrix::identity(3);
    for (&k, &alpha) in SU3_GENERATORS.iter().zip(&g.0) {
        let lambda = gell_mann(k).expect("valid index");
        let kind = if k == 8 { ExpKind::Diagonal } else { ExpKind::Cubic };
        let factor = expm_structured(&lambda, I * r(alpha), kind).expect("structure holds");
        u = &u * &factor;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{c, CVector, ONE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classical_angles_give_classical_gates() {
        assert_eq!(StrategyAngles::identity().matrix(), CMatrix::identity(2));
        let y = StrategyAngles::flip().matrix();
        assert!(y.max_abs_diff(&classical_gate(ClassicalGate::Y)).unwrap() < 1e-16);
    }

    #[test]
    fn determinant_is_one() {
        let g = StrategyAngles::new(1.1, 2.3, 0.7).unwrap();
        let d = g.matrix().det().unwrap();
        assert!((d - ONE).norm() < 1e-15);
    }

    #[test]
    fn range_violations_rejected() {
        assert!(StrategyAngles::new(-0.1, 0.0, 0.0).is_err());
        assert!(StrategyAngles::new(0.0, 7.0, 0.0).is_err());
        assert!(StrategyAngles::new(0.0, 0.0, 3.5).is_err());
        assert!(StrategyAngles::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(StrategyAngles::new(TAU, TAU, PI).is_ok());
    }

    #[test]
    fn poles_drop_the_idle_angle() {
        let a = StrategyAngles::new(0.4, 1.0, 0.0).unwrap();
        let b = StrategyAngles::new(0.4, 5.0, 0.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.alpha(), 0.0);
        let p = StrategyAngles::new(2.0, 1.0, PI).unwrap();
        let q = StrategyAngles::new(3.0, 1.0, PI).unwrap();
        assert_eq!(p, q);
        // the kept angle still matters
        assert_ne!(a, StrategyAngles::new(0.5, 1.0, 0.0).unwrap());
    }

    #[test]
    fn zero_and_two_pi_are_distinct_values() {
        let a = StrategyAngles::new(0.0, 1.0, 1.0).unwrap();
        let b = StrategyAngles::new(TAU, 1.0, 1.0).unwrap();
        assert_ne!(a, b);
        assert!(a.same_up_to_sign(&b, 1e-12));
    }

    #[test]
    fn wrapped_reduces_modulo() {
        let g = StrategyAngles::wrapped(-PI / 2.0, TAU + 0.25, 1.0);
        assert!((g.phi() - 1.5 * PI).abs() < 1e-15);
        assert!((g.alpha() - 0.25).abs() < 1e-15);
        assert_eq!(StrategyAngles::wrapped(-1e-18, 0.0, 1.0).phi(), 0.0);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let g: StrategyAngles = "1.25, 0.5,3.14159265".parse().unwrap();
        let back: StrategyAngles = g.to_string().parse().unwrap();
        assert_eq!(g, back);
        assert!("1,2".parse::<StrategyAngles>().is_err());
        assert!("a,b,c".parse::<StrategyAngles>().is_err());
    }

    #[test]
    fn serde_validates() {
        let g: StrategyAngles = serde_json::from_str(r#"{"phi":1.0,"alpha":2.0,"theta":0.5}"#).unwrap();
        assert_eq!(g, StrategyAngles::new(1.0, 2.0, 0.5).unwrap());
        assert!(serde_json::from_str::<StrategyAngles>(r#"{"phi":1.0,"alpha":2.0,"theta":9}"#).is_err());
    }

    #[test]
    fn y_gate_sign_convention() {
        let y = classical_gate(ClassicalGate::Y);
        let i = classical_gate(ClassicalGate::I);
        let e0 = CVector::basis(2, 0);
        let e1 = CVector::basis(2, 1);
        assert_eq!(i.apply(&e0).unwrap(), e0);
        assert_eq!(y.apply(&e1).unwrap(), e0);
        assert_eq!(y.apply(&e0).unwrap(), e1.scale(-ONE));
    }

    #[test]
    fn bloch_poles_and_equator() {
        let n = bloch_coords(ONE, ZERO).unwrap();
        assert_eq!(n, [0.0, 0.0, 1.0]);
        let s = bloch_coords(ZERO, ONE).unwrap();
        assert!((s[2] + 1.0).abs() < 1e-15 && s[0].abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = bloch_coords(c(h, 0.0), c(0.0, h)).unwrap();
        assert!(e[0].abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15 && e[2].abs() < 1e-15);
        // global phase does not move the point
        let e2 = bloch_coords(c(0.0, h), c(-h, 0.0)).unwrap();
        assert!((e2[1] - 1.0).abs() < 1e-15);
        assert!(bloch_coords(ONE, ONE).is_err());
    }

    #[test]
    fn su3_examples() {
        assert!(
            su3_from_angles(&Su3Angles([0.0; 8]))
                .max_abs_diff(&CMatrix::identity(3))
                .unwrap()
                < 1e-15
        );
        let u = su3_from_angles(&Su3Angles([0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        let expect = CMatrix::diag(&[cis(0.3), cis(-0.3), ONE]);
        assert!(u.max_abs_diff(&expect).unwrap() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let u = su3_from_angles(&Su3Angles::random(&mut rng));
            assert!(u.is_unitary(1e-10).unwrap());
            assert!((u.det().unwrap() - ONE).norm() < 1e-10);
        }
    }
}
