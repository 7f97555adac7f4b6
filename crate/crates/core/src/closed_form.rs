//! Exact piecewise `P_max` for the two one-parameter three-qubit families
//!
//! ```text
//! W3(κ) ∝ |100⟩ + κ|010⟩ + κ²|001⟩
//! W4(κ) ∝ |100⟩ + κ|010⟩ + κ²|001⟩ + κ³|111⟩
//! ```
//!
//! together with the triangle / cyclic-quadrilateral geometry behind their
//! middle branches. Outside the middle interval `P_max` is the square of the
//! largest normalized coefficient; inside it is `4R²`, with `R` the
//! circumradius of the polygon whose sides are the normalized coefficients.
//! Middle intervals are closed; both neighbouring branches agree at the
//! endpoints.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::{PureState, C64};

/// Which branch of a family's piecewise expression applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Square of the first coefficient.
    LargestFirst,
    /// Circumdiameter squared of the coefficient polygon.
    Circumcircle,
    /// Square of the last coefficient.
    LargestLast,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::LargestFirst => "largest-first",
            Regime::Circumcircle => "circumcircle",
            Regime::LargestLast => "largest-last",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "largest-first" => Ok(Regime::LargestFirst),
            "circumcircle" => Ok(Regime::Circumcircle),
            "largest-last" => Ok(Regime::LargestLast),
            other => Err(Error::InvalidArgument(format!("unknown regime {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyCurvePoint {
    pub kappa: f64,
    pub p_max: f64,
    pub regime: Regime,
    /// `κ` sits on a branch boundary (relative distance ≤ 1e-12).
    pub at_boundary: bool,
}

/// Above this `κ` only the asymptotic branch is evaluated.
pub const KAPPA_ASYMPTOTIC: f64 = 1e6;

fn check_kappa(kappa: f64) -> Result<()> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "kappa must be finite and non-negative, got {kappa}"
        )));
    }
    Ok(())
}

fn near(kappa: f64, b: f64) -> bool {
    (kappa - b).abs() <= 1e-12 * b
}

fn classify(kappa: f64, (lo, hi): (f64, f64)) -> (Regime, bool) {
    let regime = if kappa < lo {
        Regime::LargestFirst
    } else if kappa <= hi {
        Regime::Circumcircle
    } else {
        Regime::LargestLast
    };
    (regime, near(kappa, lo) || near(kappa, hi))
}

/// `κ₁ = ((√5 − 1)/2)^{1/2}` and `κ₂ = ((√5 + 1)/2)^{1/2}`.
pub fn w3_boundaries() -> (f64, f64) {
    let s5 = 5f64.sqrt();
    (((s5 - 1.0) / 2.0).sqrt(), ((s5 + 1.0) / 2.0).sqrt())
}

/// Piecewise `P_max` of the three-term W-type family.
pub fn w3_pmax(kappa: f64) -> Result<FamilyCurvePoint> {
    check_kappa(kappa)?;
    let (regime, at_boundary) = classify(kappa, w3_boundaries());
    let p_max = match regime {
        Regime::LargestFirst => {
            let k2 = kappa * kappa;
            1.0 / (1.0 + k2 + k2 * k2)
        }
        Regime::Circumcircle => {
            let k2 = kappa * kappa;
            let n = 1.0 + k2 + k2 * k2;
            4.0 * k2 * k2 * k2 / (n * n * (3.0 * k2 - 1.0 - k2 * k2))
        }
        Regime::LargestLast => {
            if kappa > KAPPA_ASYMPTOTIC {
                1.0
            } else {
                let i2 = 1.0 / (kappa * kappa);
                1.0 / (1.0 + i2 + i2 * i2)
            }
        }
    };
    Ok(FamilyCurvePoint {
        kappa,
        p_max,
        regime,
        at_boundary,
    })
}

/// Boundaries of the four-term family's middle branch,
/// `b₁ = ⅓(∛(18√57+134) − ∛(18√57−134) − 1)^{1/2} ≈ 0.685` and
/// `b₂ = (1/√3)(∛(46+6√57) + ∛(46−6√57) + 1)^{1/2} ≈ 1.46`.
pub fn w4_boundaries() -> (f64, f64) {
    let s57 = 57f64.sqrt();
    let lo = ((18.0 * s57 + 134.0).cbrt() - (18.0 * s57 - 134.0).cbrt() - 1.0).sqrt() / 3.0;
    let hi = ((46.0 + 6.0 * s57).cbrt() + (46.0 - 6.0 * s57).cbrt() + 1.0).sqrt() / 3f64.sqrt();
    (lo, hi)
}

/// Piecewise `P_max` of the four-term family. The middle branch is
/// `8κ⁶ / (−1 + 2κ² + κ⁴ + 12κ⁶ + κ⁸ + 2κ¹⁰ − κ¹²)`, the cyclic-quadrilateral
/// circumdiameter squared of `(1, κ, κ², κ³)/√N`.
pub fn w4_pmax(kappa: f64) -> Result<FamilyCurvePoint> {
    check_kappa(kappa)?;
    let (regime, at_boundary) = classify(kappa, w4_boundaries());
    let p_max = match regime {
        Regime::LargestFirst => {
            let k2 = kappa * kappa;
            1.0 / (1.0 + k2 * (1.0 + k2 * (1.0 + k2)))
        }
        Regime::Circumcircle => {
            let k2 = kappa * kappa;
            let k6 = k2 * k2 * k2;
            let den = -1.0 + k2 * (2.0 + k2 * (1.0 + k2 * (12.0 + k2 * (1.0 + k2 * (2.0 - k2)))));
            8.0 * k6 / den
        }
        Regime::LargestLast => {
            if kappa > KAPPA_ASYMPTOTIC {
                1.0
            } else {
                let i2 = 1.0 / (kappa * kappa);
                1.0 / (1.0 + i2 * (1.0 + i2 * (1.0 + i2)))
            }
        }
    };
    Ok(FamilyCurvePoint {
        kappa,
        p_max,
        regime,
        at_boundary,
    })
}

fn check_sides(sides: &[f64]) -> Result<()> {
    if sides.iter().any(|&s| !s.is_finite() || s < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sides must be finite and non-negative: {sides:?}"
        )));
    }
    Ok(())
}

/// Squared circumdiameter `(abc)² / (4K²)` of a strictly acute triangle,
/// `K` being the Heron area.
pub fn triangle_circumdiameter_sq(a: f64, b: f64, c: f64) -> Result<f64> {
    check_sides(&[a, b, c])?;
    let mut s = [a, b, c];
    s.sort_by(f64::total_cmp);
    let [x, y, z] = s;
    if z >= x + y {
        return Err(Error::Regime(format!(
            "({a}, {b}, {c}) is a degenerate or impossible triangle; use the largest-coefficient rule"
        )));
    }
    if z * z >= x * x + y * y {
        return Err(Error::Regime(format!(
            "({a}, {b}, {c}) is not strictly acute; use the largest-coefficient rule"
        )));
    }
    // 16K² = (x+y+z)(−x+y+z)(x−y+z)(x+y−z)
    let k16 = (x + y + z) * (-x + y + z) * (x - y + z) * (x + y - z);
    Ok(4.0 * (x * y * z).powi(2) / k16)
}

/// Squared circumdiameter `4R²` of the convex cyclic quadrilateral with the
/// given sides, `R² = (ab+cd)(ac+bd)(ad+bc) / (16K²)` with Brahmagupta's `K`.
/// The value is independent of the side order.
pub fn cyclic_quadrilateral_circumdiameter_sq(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    check_sides(&[a, b, c, d])?;
    let largest = a.max(b).max(c).max(d);
    if 2.0 * largest >= a + b + c + d {
        return Err(Error::Regime(format!(
            "({a}, {b}, {c}, {d}) do not close a quadrilateral"
        )));
    }
    let s = 0.5 * (a + b + c + d);
    let k2 = (s - a) * (s - b) * (s - c) * (s - d);
    Ok((a * b + c * d) * (a * c + b * d) * (a * d + b * c) / (4.0 * k2))
}

/// `P_max` of `a|100⟩ + b|010⟩ + c|001⟩` (coefficients normalized internally):
/// the largest squared coefficient when it reaches 1/2, otherwise the acute
/// triangle's circumdiameter squared.
pub fn wtype_general_pmax(a: f64, b: f64, c: f64) -> Result<f64> {
    check_sides(&[a, b, c])?;
    let n2 = a * a + b * b + c * c;
    if n2 == 0.0 {
        return Err(Error::NullState);
    }
    let n = n2.sqrt();
    let (a, b, c) = (a / n, b / n, c / n);
    let top = a.max(b).max(c);
    if top * top >= 0.5 - 4.0 * f64::EPSILON {
        Ok(top * top)
    } else {
        triangle_circumdiameter_sq(a, b, c)
    }
}

/// The two parameterized families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    W3,
    W4,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::W3 => "w3",
            Family::W4 => "w4",
        }
    }

    /// Normalized family member at `κ`.
    pub fn state(self, kappa: f64) -> Result<PureState> {
        check_kappa(kappa)?;
        let terms: &[(usize, i32)] = match self {
            Family::W3 => &[(0b100, 0), (0b010, 1), (0b001, 2)],
            Family::W4 => &[(0b100, 0), (0b010, 1), (0b001, 2), (0b111, 3)],
        };
        // scale by the largest power so huge κ does not overflow
        let top = terms
            .iter()
            .map(|&(_, p)| kappa.powi(p))
            .fold(1.0, f64::max);
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        for &(idx, p) in terms {
            amps[idx] = C64::new(kappa.powi(p) / top, 0.0);
        }
        PureState::normalized(vec![2, 2, 2], amps)
    }

    pub fn pmax(self, kappa: f64) -> Result<FamilyCurvePoint> {
        match self {
            Family::W3 => w3_pmax(kappa),
            Family::W4 => w4_pmax(kappa),
        }
    }

    pub fn boundaries(self) -> (f64, f64) {
        match self {
            Family::W3 => w3_boundaries(),
            Family::W4 => w4_boundaries(),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "w3" => Ok(Family::W3),
            "w4" => Ok(Family::W4),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

/// Closed-form `P_max` for states this module can recognize: three-qubit
/// states supported on `{|100⟩, |010⟩, |001⟩}` (any phases), and members of
/// the four-term family. Returns `None` for anything else.
pub fn recognize_closed_form(state: &PureState) -> Option<f64> {
    if state.dims() != [2, 2, 2] {
        return None;
    }
    let a = state.amps();
    let tiny = 1e-14;
    let support: Vec<usize> = (0..8).filter(|&i| a[i].norm() > tiny).collect();
    if support.iter().all(|i| [0b100, 0b010, 0b001].contains(i)) {
        return wtype_general_pmax(a[0b100].norm(), a[0b010].norm(), a[0b001].norm()).ok();
    }
    if support != [0b001, 0b010, 0b100, 0b111] {
        return None;
    }
    // W4 with positive real ratios 1 : κ : κ² : κ³ up to a global phase
    let phase = a[0b100] / a[0b100].norm();
    let rel: Vec<C64> = [0b100, 0b010, 0b001, 0b111]
        .iter()
        .map(|&i| a[i] / (phase * a[0b100].norm()))
        .collect();
    if rel.iter().any(|z| z.im.abs() > 1e-9 || z.re <= 0.0) {
        return None;
    }
    let kappa = rel[1].re;
    let consistent = (rel[2].re - kappa * kappa).abs() <= 1e-9 * (1.0 + kappa * kappa)
        && (rel[3].re - kappa.powi(3)).abs() <= 1e-9 * (1.0 + kappa.powi(3));
    if consistent {
        w4_pmax(kappa).ok().map(|p| p.p_max)
    } else {
        None
    }
}
