//! Linear differential operators with position-dependent coefficients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};

use super::grid::{Grid2D, GridFunction};

/// A coefficient field, evaluated on coordinate jets so that its derivatives
/// are available wherever an operator is applied to a jet.
pub type Field = Arc<dyn Fn(Jet, Jet) -> Jet + Send + Sync>;

pub fn field(f: impl Fn(Jet, Jet) -> Jet + Send + Sync + 'static) -> Field {
    Arc::new(f)
}

fn coords(x: f64, y: f64, order: usize) -> (Jet, Jet) {
    (Jet::var_x(x, order), Jet::var_y(y, order))
}

/// A coefficient field evaluated at one point.
pub fn eval_field(f: &Field, x: f64, y: f64) -> f64 {
    let (xj, yj) = coords(x, y, 0);
    f(xj, yj).value()
}

/// c_xx ∂xx + c_xy ∂xy + c_yy ∂yy + c_x ∂x + c_y ∂y + c_0, with absent
/// coefficients meaning zero.
#[derive(Clone, Default)]
pub struct DiffOp2 {
    pub c_xx: Option<Field>,
    pub c_xy: Option<Field>,
    pub c_yy: Option<Field>,
    pub c_x: Option<Field>,
    pub c_y: Option<Field>,
    pub c_0: Option<Field>,
}

impl fmt::Debug for DiffOp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let present = |c: &Option<Field>| c.is_some();
        f.debug_struct("DiffOp2")
            .field("c_xx", &present(&self.c_xx))
            .field("c_xy", &present(&self.c_xy))
            .field("c_yy", &present(&self.c_yy))
            .field("c_x", &present(&self.c_x))
            .field("c_y", &present(&self.c_y))
            .field("c_0", &present(&self.c_0))
            .finish()
    }
}

/// Named view of the six coefficients at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct Coefficients {
    pub c_xx: f64,
    pub c_xy: f64,
    pub c_yy: f64,
    pub c_x: f64,
    pub c_y: f64,
    pub c_0: f64,
}

impl DiffOp2 {
    /// A·∂x + B·∂y + C.
    pub fn first_order(a_x: Field, a_y: Field, c: Field) -> Self {
        DiffOp2 {
            c_x: Some(a_x),
            c_y: Some(a_y),
            c_0: Some(c),
            ..Default::default()
        }
    }

    /// Multiplication by a field.
    pub fn multiply(c: Field) -> Self {
        DiffOp2 {
            c_0: Some(c),
            ..Default::default()
        }
    }

    /// -∂_i (1/M) ∂_i + V for a mass field M and potential V.
    pub fn pdm_hamiltonian(mass: Field, potential: Field) -> Self {
        let inv = {
            let mass = mass.clone();
            move |x: Jet, y: Jet| mass(x, y).recip()
        };
        let inv = field(inv);
        let neg_inv = {
            let inv = inv.clone();
            field(move |x, y| -inv(x, y))
        };
        DiffOp2 {
            c_xx: Some(neg_inv.clone()),
            c_yy: Some(neg_inv),
            c_x: Some(derivative_field(&inv, 1, 0, -1.0)),
            c_y: Some(derivative_field(&inv, 0, 1, -1.0)),
            c_0: Some(potential),
            ..Default::default()
        }
    }

    pub fn order(&self) -> usize {
        if self.c_xx.is_some() || self.c_xy.is_some() || self.c_yy.is_some() {
            2
        } else if self.c_x.is_some() || self.c_y.is_some() {
            1
        } else {
            0
        }
    }

    pub fn coefficients_at(&self, x: f64, y: f64) -> Coefficients {
        let e = |c: &Option<Field>| c.as_ref().map_or(0.0, |f| eval_field(f, x, y));
        Coefficients {
            c_xx: e(&self.c_xx),
            c_xy: e(&self.c_xy),
            c_yy: e(&self.c_yy),
            c_x: e(&self.c_x),
            c_y: e(&self.c_y),
            c_0: e(&self.c_0),
        }
    }

    /// Formal adjoint (plain Lebesgue measure) of a first-order operator:
    /// -A_x ∂x - A_y ∂y + (C - ∂x A_x - ∂y A_y).
    pub fn first_order_adjoint(&self) -> Result<DiffOp2> {
        if self.order() > 1 {
            return Err(Error::InvalidParameter(
                "adjoint is only formed for first-order operators".into(),
            ));
        }
        let neg = |c: &Option<Field>| c.clone().map(|f| field(move |x: Jet, y: Jet| -f(x, y)));
        let mut terms: Vec<Field> = Vec::new();
        if let Some(c) = &self.c_0 {
            terms.push(c.clone());
        }
        if let Some(a) = &self.c_x {
            terms.push(derivative_field(a, 1, 0, -1.0));
        }
        if let Some(b) = &self.c_y {
            terms.push(derivative_field(b, 0, 1, -1.0));
        }
        let c_0 = (!terms.is_empty()).then(|| sum_field(terms));
        Ok(DiffOp2 {
            c_x: neg(&self.c_x),
            c_y: neg(&self.c_y),
            c_0,
            ..Default::default()
        })
    }

    /// Applies the operator to a jet of order K expanded at (x, y), giving a
    /// jet of order K - m.
    pub fn apply_jet(&self, f: &Jet, x: f64, y: f64) -> Jet {
        let m = self.order();
        assert!(
            f.order() >= m,
            "jet order {} too low for an order-{m} operator",
            f.order()
        );
        let out_order = f.order() - m;
        let (xj, yj) = coords(x, y, out_order);
        let mut acc = Jet::constant(0.0, out_order);
        let term = |c: &Option<Field>, d: &dyn Fn() -> Jet, acc: &mut Jet| {
            if let Some(c) = c {
                *acc += c(xj, yj) * d().truncate(out_order);
            }
        };
        term(&self.c_xx, &|| f.dx().dx(), &mut acc);
        term(&self.c_xy, &|| f.dx().dy(), &mut acc);
        term(&self.c_yy, &|| f.dy().dy(), &mut acc);
        term(&self.c_x, &|| f.dx(), &mut acc);
        term(&self.c_y, &|| f.dy(), &mut acc);
        term(&self.c_0, &|| *f, &mut acc);
        acc
    }

    /// Fourth-order stencil application on a grid.
    pub fn apply_grid(&self, f: &GridFunction) -> Result<GridFunction> {
        self.sample(&f.grid)?.apply(f)
    }

    /// Evaluates the coefficients once on the nodes of `grid`.
    pub fn sample(&self, grid: &Grid2D) -> Result<SampledOp> {
        if grid.is_line() && (self.c_y.is_some() || self.c_yy.is_some() || self.c_xy.is_some()) {
            return Err(Error::GridTooSmall(
                "y derivatives need a two-dimensional grid".into(),
            ));
        }
        let on_grid = |c: &Option<Field>| {
            c.as_ref().map(|c| {
                grid.points()
                    .map(|(x, y)| eval_field(c, x, y))
                    .collect::<Vec<_>>()
            })
        };
        Ok(SampledOp {
            grid: *grid,
            coeffs: [
                on_grid(&self.c_xx),
                on_grid(&self.c_xy),
                on_grid(&self.c_yy),
                on_grid(&self.c_x),
                on_grid(&self.c_y),
                on_grid(&self.c_0),
            ],
        })
    }
}

/// A [`DiffOp2`] with its coefficients tabulated on one grid, for repeated
/// application.
#[derive(Debug, Clone)]
pub struct SampledOp {
    grid: Grid2D,
    /// xx, xy, yy, x, y, constant.
    coeffs: [Option<Vec<f64>>; 6],
}

impl SampledOp {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.grid != self.grid {
            return Err(Error::GridMismatch(
                "operator was sampled on a different grid".into(),
            ));
        }
        let mut out = GridFunction::zeros(f.grid);
        let derivative = |slot: usize| -> Result<GridFunction> {
            match slot {
                0 => f.dxx(),
                1 => f.dx()?.dy(),
                2 => f.dyy(),
                3 => f.dx(),
                4 => f.dy(),
                _ => Ok(f.clone()),
            }
        };
        for (slot, c) in self.coeffs.iter().enumerate() {
            if let Some(c) = c {
                let d = derivative(slot)?;
                for ((o, ci), di) in out.values.iter_mut().zip(c).zip(&d.values) {
                    *o += ci * di;
                }
            }
        }
        Ok(out)
    }
}

/// s · ∂x^i ∂y^j of a field, as a new field.
pub fn derivative_field(f: &Field, i: usize, j: usize, s: f64) -> Field {
    let f = f.clone();
    field(move |x: Jet, y: Jet| {
        let o = x.order();
        assert!(
            o + i + j <= MAX_ORDER,
            "coefficient derivative exceeds the jet order limit"
        );
        let (xe, ye) = coords(x.value(), y.value(), o + i + j);
        let mut g = f(xe, ye);
        for _ in 0..i {
            g = g.dx();
        }
        for _ in 0..j {
            g = g.dy();
        }
        g.scale(s)
    })
}

pub fn sum_field(terms: Vec<Field>) -> Field {
    field(move |x: Jet, y: Jet| {
        let mut acc = Jet::constant(0.0, x.order());
        for t in &terms {
            acc += t(x, y);
        }
        acc
    })
}

/// c_xx d²/dx² + c_x d/dx + c_0 on the half-line.
#[derive(Clone, Default)]
pub struct DiffOp1 {
    pub c_xx: Option<Field>,
    pub c_x: Option<Field>,
    pub c_0: Option<Field>,
}

impl fmt::Debug for DiffOp1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffOp1")
            .field("c_xx", &self.c_xx.is_some())
            .field("c_x", &self.c_x.is_some())
            .field("c_0", &self.c_0.is_some())
            .finish()
    }
}

impl DiffOp1 {
    /// a d/dx + b.
    pub fn first_order(a: Field, b: Field) -> Self {
        DiffOp1 {
            c_x: Some(a),
            c_0: Some(b),
            ..Default::default()
        }
    }

    pub fn order(&self) -> usize {
        if self.c_xx.is_some() {
            2
        } else if self.c_x.is_some() {
            1
        } else {
            0
        }
    }

    /// Formal adjoint of a first-order operator: -a d/dx + (b - a').
    pub fn first_order_adjoint(&self) -> Result<DiffOp1> {
        if self.order() > 1 {
            return Err(Error::InvalidParameter(
                "adjoint is only formed for first-order operators".into(),
            ));
        }
        let c_x = self
            .c_x
            .clone()
            .map(|a| field(move |x: Jet, y: Jet| -a(x, y)));
        let mut terms: Vec<Field> = self.c_0.iter().cloned().collect();
        if let Some(a) = &self.c_x {
            terms.push(derivative_field(a, 1, 0, -1.0));
        }
        let c_0 = (!terms.is_empty()).then(|| sum_field(terms));
        Ok(DiffOp1 {
            c_xx: None,
            c_x,
            c_0,
        })
    }

    pub fn as_planar(&self) -> DiffOp2 {
        DiffOp2 {
            c_xx: self.c_xx.clone(),
            c_x: self.c_x.clone(),
            c_0: self.c_0.clone(),
            ..Default::default()
        }
    }

    pub fn apply_jet(&self, f: &Jet, x: f64, y: f64) -> Jet {
        self.as_planar().apply_jet(f, x, y)
    }

    pub fn apply_grid(&self, f: &GridFunction) -> Result<GridFunction> {
        self.as_planar().apply_grid(f)
    }
}
