//! General position-dependent-mass theory in two dimensions: the reduction of
//! the ordering ambiguity to an effective potential, the mass classes that
//! admit a first-order intertwiner, the hyperbolic model family and the
//! one-dimensional solution.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Derivs, Jet};
use crate::model::AnalyticState;
use crate::operators::diffop::{derivative_field, eval_field, field, DiffOp1, Field};
use crate::operators::grid::Grid2D;
use crate::operators::identities::state_residual;
use crate::operators::OpExpr;

/// Ordering parameters of the kinetic term, tied by α + β + γ = −1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbiguityParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl AmbiguityParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let sum = alpha + beta + gamma;
        if !sum.is_finite() || (sum + 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "alpha + beta + gamma = {sum}, expected -1"
            )));
        }
        Ok(AmbiguityParams { alpha, beta, gamma })
    }

    /// γ is fixed by the constraint.
    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Self {
        AmbiguityParams {
            alpha,
            beta,
            gamma: -1.0 - alpha - beta,
        }
    }
}

fn derivs_at(f: &Field, x: f64, y: f64) -> Derivs {
    Derivs::from_jet(&f(Jet::var_x(x, 2), Jet::var_y(y, 2)))
}

/// V + ½(β+1)ΔM/M² − [α(α+β+1)+β+1] |∇M|²/M³ at (x, y).
pub fn effective_potential(
    mass: &Field,
    potential: &Field,
    ap: &AmbiguityParams,
    x: f64,
    y: f64,
) -> Result<f64> {
    let m = derivs_at(mass, x, y);
    if !(m.value > 0.0) {
        return Err(Error::NonPositiveMass { x, y });
    }
    let (alpha, beta) = (ap.alpha, ap.beta);
    let lap = m.dxx + m.dyy;
    let grad2 = m.dx * m.dx + m.dy * m.dy;
    Ok(
        eval_field(potential, x, y) + 0.5 * (beta + 1.0) * lap / (m.value * m.value)
            - (alpha * (alpha + beta + 1.0) + beta + 1.0) * grad2 / m.value.powi(3),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassClass {
    Hyperbolic,
    Rational,
    Trigonometric,
}

impl MassClass {
    pub fn name(&self) -> &'static str {
        match self {
            MassClass::Hyperbolic => "hyperbolic",
            MassClass::Rational => "rational",
            MassClass::Trigonometric => "trigonometric",
        }
    }
}

impl std::str::FromStr for MassClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperbolic" => Ok(MassClass::Hyperbolic),
            "rational" => Ok(MassClass::Rational),
            "trigonometric" => Ok(MassClass::Trigonometric),
            _ => Err(Error::Unknown {
                kind: "mass class",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, serde::Deserialize)]
pub struct ClassConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub g: f64,
}

/// Interval of x on which the mass is declared; y is unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XDomain {
    pub x_min: f64,
    pub x_max: f64,
}

impl XDomain {
    pub fn new(x_min: f64, x_max: f64) -> Result<Self> {
        if x_min.is_nan() || x_max.is_nan() || x_min >= x_max {
            return Err(Error::InvalidParameter(format!(
                "empty domain [{x_min}, {x_max}]"
            )));
        }
        Ok(XDomain { x_min, x_max })
    }

    pub fn whole_line() -> Self {
        XDomain {
            x_min: f64::NEG_INFINITY,
            x_max: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.x_min <= x && x <= self.x_max
    }
}

/// Mass M = 1/D(x)² together with the intertwiner coefficients A⁽¹⁾, A⁽²⁾.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassClassSolution {
    pub class: MassClass,
    pub constants: ClassConstants,
    pub q: Option<f64>,
    pub domain: XDomain,
}

/// The three coefficient fields entering the constraint system.
#[derive(Clone)]
pub struct IntertwinerFields {
    pub mass: Field,
    pub a1: Field,
    pub a2: Field,
}

fn singular_at(x: f64) -> Error {
    Error::Domain(format!(
        "mass is singular (denominator vanishes) at x = {x}"
    ))
}

pub fn mass_class_solution(
    class: MassClass,
    constants: ClassConstants,
    q: Option<f64>,
    domain: XDomain,
) -> Result<MassClassSolution> {
    let q = match class {
        MassClass::Rational => None,
        _ => match q {
            Some(q) if q > 0.0 && q.is_finite() => Some(q),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "{} class needs q > 0",
                    class.name()
                )))
            }
        },
    };
    let sol = MassClassSolution {
        class,
        constants,
        q,
        domain,
    };
    sol.check_domain()?;
    Ok(sol)
}

impl MassClassSolution {
    fn q(&self) -> f64 {
        self.q.unwrap_or(0.0)
    }

    /// C in f″ = C f.
    pub fn separation_constant(&self) -> f64 {
        match self.class {
            MassClass::Hyperbolic => -self.q() * self.q(),
            MassClass::Rational => 0.0,
            MassClass::Trigonometric => self.q() * self.q(),
        }
    }

    fn check_domain(&self) -> Result<()> {
        let ClassConstants { c, d, .. } = self.constants;
        let XDomain { x_min, x_max } = self.domain;
        let inside = |x: f64| -> Result<()> {
            if self.domain.contains(x) {
                Err(singular_at(x))
            } else {
                Ok(())
            }
        };
        match self.class {
            MassClass::Hyperbolic => {
                if c == 0.0 && d == 0.0 {
                    return Err(singular_at(if x_min.is_finite() { x_min } else { 0.0 }));
                }
                // c sinh + d cosh vanishes only where tanh qx = −d/c.
                if c != 0.0 && (d / c).abs() < 1.0 {
                    inside((-d / c).atanh() / self.q())?;
                }
            }
            MassClass::Rational => {
                if c == 0.0 {
                    if d == 0.0 {
                        return Err(singular_at(if x_min.is_finite() { x_min } else { 0.0 }));
                    }
                } else {
                    inside(-d / c)?;
                }
            }
            MassClass::Trigonometric => {
                if !x_min.is_finite() || !x_max.is_finite() {
                    return Err(Error::Domain(
                        "trigonometric masses need finite domain bounds".into(),
                    ));
                }
                if c == 0.0 && d == 0.0 {
                    return Err(singular_at(x_min));
                }
                // c sin + d cos = r sin(qx + φ), zero at qx + φ = nπ.
                let q = self.q();
                let phase = d.atan2(c);
                let n = ((q * x_min + phase) / PI).ceil();
                let root = (n * PI - phase) / q;
                inside(root)?;
            }
        }
        Ok(())
    }

    /// D(x) = M^{−1/2}.
    pub fn denominator(&self, x: Jet) -> Jet {
        let ClassConstants { c, d, .. } = self.constants;
        let q = self.q();
        match self.class {
            MassClass::Hyperbolic => {
                let qx = x * q;
                qx.sinh() * c + qx.cosh() * d
            }
            MassClass::Rational => x * c + d,
            MassClass::Trigonometric => {
                let qx = x * q;
                qx.sin() * c + qx.cos() * d
            }
        }
    }

    pub fn mass_jet(&self, x: Jet) -> Jet {
        let den = self.denominator(x);
        (den * den).recip()
    }

    pub fn a1_jet(&self, x: Jet, y: Jet) -> Jet {
        let ClassConstants { a, b, .. } = self.constants;
        let q = self.q();
        let f = match self.class {
            MassClass::Hyperbolic => {
                let qy = y * q;
                qy.sin() * a + qy.cos() * b
            }
            MassClass::Rational => y * a + b,
            MassClass::Trigonometric => {
                let qy = y * q;
                qy.sinh() * a + qy.cosh() * b
            }
        };
        f * self.denominator(x)
    }

    pub fn a2_jet(&self, x: Jet, y: Jet) -> Jet {
        let ClassConstants { a, b, c, d, g } = self.constants;
        let q = self.q();
        match self.class {
            MassClass::Hyperbolic => {
                let (qx, qy) = (x * q, y * q);
                (qy.sin() * b - qy.cos() * a) * (qx.cosh() * c + qx.sinh() * d) + g
            }
            MassClass::Rational => (x * x - y * y) * (-0.5 * a * c) - x * (a * d) + y * (b * c) + g,
            MassClass::Trigonometric => {
                let (qx, qy) = (x * q, y * q);
                (qy.cosh() * a + qy.sinh() * b) * (qx.cos() * c - qx.sin() * d) + g
            }
        }
    }

    pub fn mass(&self, x: f64) -> Derivs {
        Derivs::from_jet(&self.mass_jet(Jet::var_x(x, 2)))
    }

    pub fn a1(&self, x: f64, y: f64) -> Derivs {
        Derivs::from_jet(&self.a1_jet(Jet::var_x(x, 2), Jet::var_y(y, 2)))
    }

    pub fn a2(&self, x: f64, y: f64) -> Derivs {
        Derivs::from_jet(&self.a2_jet(Jet::var_x(x, 2), Jet::var_y(y, 2)))
    }

    pub fn fields(&self) -> IntertwinerFields {
        let (s1, s2, s3) = (*self, *self, *self);
        IntertwinerFields {
            mass: field(move |x, _| s1.mass_jet(x)),
            a1: field(move |x, y| s2.a1_jet(x, y)),
            a2: field(move |x, y| s3.a2_jet(x, y)),
        }
    }
}

/// Maxima over the sample of the constraint residuals on the mass and the
/// first-order coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintResiduals {
    /// ∂xA⁽¹⁾ + (A⁽¹⁾∂xM + A⁽²⁾∂yM)/2M.
    pub scaling: f64,
    /// ∂yA⁽¹⁾ + ∂xA⁽²⁾.
    pub antisymmetric: f64,
    /// ∂xA⁽¹⁾ − ∂yA⁽²⁾.
    pub symmetric: f64,
    pub laplacian_a1: f64,
    pub laplacian_a2: f64,
    /// f″ − C f with f = A⁽¹⁾ M^{1/2}.
    pub separation_f: f64,
    /// −D″/D − C with D = M^{−1/2}.
    pub separation_mass: f64,
    /// Mean of −D″/D over the sample; reported beside the residuals.
    #[serde(skip)]
    pub recovered_c: f64,
}

impl ConstraintResiduals {
    pub fn max(&self) -> f64 {
        [
            self.scaling,
            self.antisymmetric,
            self.symmetric,
            self.laplacian_a1,
            self.laplacian_a2,
            self.separation_f,
            self.separation_mass,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn constraint_residuals(sol: &MassClassSolution, points: &[(f64, f64)]) -> ConstraintResiduals {
    constraint_residuals_of(&sol.fields(), sol.separation_constant(), points)
}

/// Residuals for arbitrary coefficient fields, with the mass depending on x
/// only and `c` the separation constant.
pub fn constraint_residuals_of(
    fields: &IntertwinerFields,
    c: f64,
    points: &[(f64, f64)],
) -> ConstraintResiduals {
    let mut r = ConstraintResiduals {
        scaling: 0.0,
        antisymmetric: 0.0,
        symmetric: 0.0,
        laplacian_a1: 0.0,
        laplacian_a2: 0.0,
        separation_f: 0.0,
        separation_mass: 0.0,
        recovered_c: 0.0,
    };
    let mut c_sum = 0.0;
    for &(x, y) in points {
        let m = derivs_at(&fields.mass, x, y);
        let a1 = derivs_at(&fields.a1, x, y);
        let a2 = derivs_at(&fields.a2, x, y);
        let den = Derivs::from_jet(&(fields.mass)(Jet::var_x(x, 2), Jet::var_y(y, 2)).powf(-0.5));
        let up = |slot: &mut f64, v: f64| *slot = slot.max(v.abs());
        up(
            &mut r.scaling,
            a1.dx + (a1.value * m.dx + a2.value * m.dy) / (2.0 * m.value),
        );
        up(&mut r.antisymmetric, a1.dy + a2.dx);
        up(&mut r.symmetric, a1.dx - a2.dy);
        up(&mut r.laplacian_a1, a1.dxx + a1.dyy);
        up(&mut r.laplacian_a2, a2.dxx + a2.dyy);
        up(&mut r.separation_f, (a1.dyy - c * a1.value) / den.value);
        let ratio = -den.dxx / den.value;
        up(&mut r.separation_mass, ratio - c);
        c_sum += ratio;
    }
    if !points.is_empty() {
        r.recovered_c = c_sum / points.len() as f64;
    }
    r
}

/// Mass-class report for export.
#[derive(Debug, Clone, Serialize)]
pub struct MassClassReport {
    pub class: MassClass,
    pub constants: ClassConstants,
    pub q: Option<f64>,
    pub domain: XDomain,
    pub separation_constant: f64,
    pub recovered_separation_constant: f64,
    pub residuals: ConstraintResiduals,
}

impl MassClassReport {
    pub fn new(sol: &MassClassSolution, points: &[(f64, f64)]) -> Self {
        let residuals = constraint_residuals(sol, points);
        MassClassReport {
            class: sol.class,
            constants: sol.constants,
            q: sol.q,
            domain: sol.domain,
            separation_constant: sol.separation_constant(),
            recovered_separation_constant: residuals.recovered_c,
            residuals,
        }
    }
}

/// Residuals at one point of the full intertwining system for the
/// coefficient fields, the free term B and a potential pair (V, V₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntertwiningResiduals {
    /// ∂iA^j + ∂jA^i + δij A^k∂kM/M, largest of the three components.
    pub coefficients: f64,
    /// The free-term equations, largest of the two components.
    pub free_term: f64,
    /// A^i∂iV + B(V − V₁) + ΔB/M − ∂iB∂iM/M².
    pub potential: f64,
}

pub fn intertwining_residuals(
    fields: &IntertwinerFields,
    b: &Field,
    v: &Field,
    v1: &Field,
    x: f64,
    y: f64,
) -> IntertwiningResiduals {
    let m = derivs_at(&fields.mass, x, y);
    let a = [derivs_at(&fields.a1, x, y), derivs_at(&fields.a2, x, y)];
    let bd = derivs_at(b, x, y);
    let vd = derivs_at(v, x, y);
    let gap = vd.value - eval_field(v1, x, y);
    let mv = m.value;
    let grad = |d: &Derivs| [d.dx, d.dy];
    let hess = |d: &Derivs| [[d.dxx, d.dxy], [d.dxy, d.dyy]];
    let (gm, hm) = (grad(&m), hess(&m));
    let ga = [grad(&a[0]), grad(&a[1])];
    let gb = grad(&bd);

    let flux = (a[0].value * gm[0] + a[1].value * gm[1]) / mv;
    let mut coefficients: f64 = 0.0;
    for (i, j) in [(0, 0), (1, 1), (0, 1)] {
        let delta = if i == j { flux } else { 0.0 };
        coefficients = coefficients.max((ga[j][i] + ga[i][j] + delta).abs());
    }

    let mut free_term: f64 = 0.0;
    for i in 0..2 {
        let mut s = a[i].value * gap + (a[i].dxx + a[i].dyy) / mv + 2.0 * gb[i] / mv;
        for j in 0..2 {
            s += a[j].value * (hm[i][j] / (mv * mv) - 2.0 * gm[i] * gm[j] / mv.powi(3));
            s -= ga[i][j] * gm[j] / (mv * mv);
        }
        free_term = free_term.max(s.abs());
    }

    let potential =
        a[0].value * vd.dx + a[1].value * vd.dy + bd.value * gap + (bd.dxx + bd.dyy) / mv
            - (gb[0] * gm[0] + gb[1] * gm[1]) / (mv * mv);

    IntertwiningResiduals {
        coefficients,
        free_term,
        potential: potential.abs(),
    }
}

/// Hyperbolic model family with mass sech²qx and integration constants
/// F, G (free term) and J, K (potential).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicFamily {
    pub q: f64,
    pub f: f64,
    pub g: f64,
    pub j: f64,
    pub k: f64,
}

/// Maxima over a sample of the family's consistency residuals. Entries that
/// need a potential are absent when G ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyResiduals {
    pub coefficients: f64,
    pub free_term: Option<f64>,
    pub potential: Option<f64>,
    /// V − V₁ obtained from ∂xB against 2qF coth²qx.
    pub gap_from_dx: f64,
    /// V − V₁ obtained from ∂yB against 2qF coth²qx.
    pub gap_from_dy: f64,
    /// The separable potential inserted into the equation for V, including
    /// the G term that separation cannot absorb.
    pub separability: f64,
}

pub fn hyperbolic_family(q: f64, f: f64, g: f64, j: f64, k: f64) -> Result<HyperbolicFamily> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "q must be positive, got {q}"
        )));
    }
    Ok(HyperbolicFamily { q, f, g, j, k })
}

impl HyperbolicFamily {
    pub fn fields(&self) -> IntertwinerFields {
        let q = self.q;
        IntertwinerFields {
            mass: field(move |x: Jet, _| {
                let c = (x * q).cosh();
                (c * c).recip()
            }),
            a1: field(move |x: Jet, y: Jet| (x * q).cosh() * (y * q).sin()),
            a2: field(move |x: Jet, y: Jet| -((x * q).sinh() * (y * q).cos())),
        }
    }

    /// B = (q sinh qx + F csch qx) sin qy + G.
    pub fn free_term(&self) -> Field {
        let HyperbolicFamily { q, f, g, .. } = *self;
        field(move |x: Jet, y: Jet| {
            let sh = (x * q).sinh();
            (sh * q + sh.recip() * f) * (y * q).sin() + g
        })
    }

    fn separable_potential(&self, shift: f64, f_factor: f64) -> Field {
        let HyperbolicFamily { q, j, k, .. } = *self;
        field(move |x: Jet, y: Jet| {
            let qx = x * q;
            let ch = qx.cosh();
            let sh = qx.sinh();
            -(ch * ch) * (q * q)
                + (sh * sh).recip() * f_factor
                + (ch.ln() - (y * q).cos().ln()) * j
                + k
                + shift
        })
    }

    /// −q²cosh²qx + F(q+F)csch²qx + J ln(cosh qx sec qy) + K, for G = 0.
    pub fn v_eff(&self) -> Option<Field> {
        (self.g == 0.0).then(|| self.separable_potential(0.0, self.f * (self.q + self.f)))
    }

    /// −q²cosh²qx + F(F−q)csch²qx + J ln(cosh qx sec qy) + K − 2qF, for G = 0.
    pub fn v1_eff(&self) -> Option<Field> {
        (self.g == 0.0)
            .then(|| self.separable_potential(-2.0 * self.q * self.f, self.f * (self.f - self.q)))
    }

    /// 2qF coth²qx.
    pub fn potential_gap(&self, x: f64) -> f64 {
        let t = (self.q * x).tanh();
        2.0 * self.q * self.f / (t * t)
    }

    /// Residuals at points with x ≠ 0 and 0 < |qy| < π/2.
    pub fn residuals(&self, points: &[(f64, f64)]) -> FamilyResiduals {
        let HyperbolicFamily { q, f, g, .. } = *self;
        let fields = self.fields();
        let b = self.free_term();
        let pair = self.v_eff().zip(self.v1_eff());
        // The separable potential is G-independent; G only enters the
        // right-hand side.
        let v_sep = self.separable_potential(0.0, f * (q + f));
        let mut coefficients: f64 = 0.0;
        let mut free_term: f64 = 0.0;
        let mut potential: f64 = 0.0;
        let mut gap_from_dx: f64 = 0.0;
        let mut gap_from_dy: f64 = 0.0;
        let mut separability: f64 = 0.0;
        for &(x, y) in points {
            let (qx, qy) = (q * x, q * y);
            let (ch, sh) = (qx.cosh(), qx.sinh());
            let coth = ch / sh;
            let bd = derivs_at(&b, x, y);
            let gap = self.potential_gap(x);
            let from_dx = 2.0 * q * q * ch * ch - 2.0 * ch / qy.sin() * bd.dx;
            let from_dy = -2.0 * q * q * ch * ch + 2.0 * ch * coth / qy.cos() * bd.dy;
            gap_from_dx = gap_from_dx.max((from_dx - gap).abs());
            gap_from_dy = gap_from_dy.max((from_dy - gap).abs());

            let vd = derivs_at(&v_sep, x, y);
            let csch = 1.0 / sh;
            let rhs = -2.0
                * q
                * (q * q * ch * ch
                    + f * (q + f) * csch * csch * coth * coth
                    + f * g * csch * coth * coth / qy.sin());
            separability = separability.max((coth * vd.dx - vd.dy / qy.tan() - rhs).abs());

            match &pair {
                Some((v, v1)) => {
                    let r = intertwining_residuals(&fields, &b, v, v1, x, y);
                    coefficients = coefficients.max(r.coefficients);
                    free_term = free_term.max(r.free_term);
                    potential = potential.max(r.potential);
                }
                None => {
                    let zero = field(|x: Jet, _| Jet::constant(0.0, x.order()));
                    let r = intertwining_residuals(&fields, &b, &zero, &zero, x, y);
                    coefficients = coefficients.max(r.coefficients);
                }
            }
        }
        FamilyResiduals {
            coefficients,
            free_term: pair.is_some().then_some(free_term),
            potential: pair.is_some().then_some(potential),
            gap_from_dx,
            gap_from_dy,
            separability,
        }
    }
}

/// One-dimensional intertwiner A d/dx + B with A = M^{−1/2}; its potentials
/// make R = η†η equal to H − λ.
#[derive(Clone)]
pub struct OneDimSolution {
    pub mass: Field,
    pub free_term: Field,
    pub lambda: f64,
}

pub fn one_dim_susy(free_term: Field, lambda: f64, mass: Field) -> OneDimSolution {
    OneDimSolution {
        mass,
        free_term,
        lambda,
    }
}

impl OneDimSolution {
    /// A = M^{−1/2}.
    pub fn a(&self) -> Field {
        let mass = self.mass.clone();
        field(move |x, y| mass(x, y).powf(-0.5))
    }

    /// −(AB)′ + B² + λ.
    pub fn v_eff(&self) -> Field {
        let (a, b, lambda) = (self.a(), self.free_term.clone(), self.lambda);
        let ab = field(move |x, y| a(x, y) * b(x, y));
        let d_ab = derivative_field(&ab, 1, 0, -1.0);
        let b = self.free_term.clone();
        field(move |x, y| {
            let bv = b(x, y);
            d_ab(x, y) + bv * bv + lambda
        })
    }

    /// A(A″ − 2B′).
    pub fn potential_gap(&self) -> Field {
        let a = self.a();
        let a2 = derivative_field(&a, 2, 0, 1.0);
        let b1 = derivative_field(&self.free_term, 1, 0, -2.0);
        field(move |x, y| a(x, y) * (a2(x, y) + b1(x, y)))
    }

    /// V_eff − A(A″ − 2B′).
    pub fn v1_eff(&self) -> Field {
        let (v, gap) = (self.v_eff(), self.potential_gap());
        field(move |x, y| v(x, y) - gap(x, y))
    }

    pub fn intertwiner(&self) -> DiffOp1 {
        DiffOp1::first_order(self.a(), self.free_term.clone())
    }

    /// −d/dx (1/M) d/dx + V_eff.
    pub fn hamiltonian(&self) -> DiffOp1 {
        let mass = self.mass.clone();
        let inv = field(move |x, y| mass(x, y).recip());
        let neg_inv = {
            let inv = inv.clone();
            field(move |x, y| -inv(x, y))
        };
        DiffOp1 {
            c_xx: Some(neg_inv),
            c_x: Some(derivative_field(&inv, 1, 0, -1.0)),
            c_0: Some(self.v_eff()),
        }
    }

    /// η†η − (H − λ), which vanishes identically.
    pub fn defect(&self) -> OpExpr {
        let eta = self.intertwiner();
        let eta_dagger = eta.first_order_adjoint().expect("first-order operator");
        OpExpr::line(&eta_dagger) * OpExpr::line(&eta) - OpExpr::line(&self.hamiltonian())
            + OpExpr::Scalar(self.lambda)
    }

    /// Largest relative sup residual of the defect on the probes.
    pub fn probe_residual(&self, probes: &[&dyn AnalyticState], sample: &Grid2D) -> Result<f64> {
        let defect = self.defect();
        let mut worst: f64 = 0.0;
        for p in probes {
            worst = worst.max(state_residual(&defect, *p, sample)?.1);
        }
        Ok(worst)
    }
}
