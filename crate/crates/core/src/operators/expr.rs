//! Operator expressions: sums, scalar multiples and compositions of
//! differential operators, applied factor by factor.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::Result;
use crate::jet::Jet;

use super::diffop::{DiffOp1, DiffOp2, SampledOp};
use super::grid::{Grid2D, GridFunction};

/// Sampled operators on one grid, keyed by operator address.
type GridTables = HashMap<usize, (Arc<DiffOp2>, SampledOp)>;

/// Tabulated coefficients of the operators applied so far, keyed by grid and
/// operator identity. Holding the `Arc` keeps the key address from being
/// reused while the entry lives.
#[derive(Default)]
pub struct GridCache {
    tables: Vec<(Grid2D, GridTables)>,
}

impl GridCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn sampled(&mut self, op: &Arc<DiffOp2>, grid: &Grid2D) -> Result<&SampledOp> {
        let slot = match self.tables.iter().position(|(g, _)| g == grid) {
            Some(i) => i,
            None => {
                self.tables.push((*grid, HashMap::new()));
                self.tables.len() - 1
            }
        };
        let table = &mut self.tables[slot].1;
        let key = Arc::as_ptr(op) as usize;
        if let std::collections::hash_map::Entry::Vacant(e) = table.entry(key) {
            e.insert((op.clone(), op.sample(grid)?));
        }
        Ok(&table[&key].1)
    }
}

#[derive(Clone, Debug)]
pub enum OpExpr {
    Zero,
    Scalar(f64),
    Atom(Arc<DiffOp2>),
    Sum(Vec<OpExpr>),
    /// Factors applied right to left.
    Product(Vec<OpExpr>),
}

impl OpExpr {
    pub fn atom(op: DiffOp2) -> Self {
        OpExpr::Atom(Arc::new(op))
    }

    pub fn line(op: &DiffOp1) -> Self {
        OpExpr::atom(op.as_planar())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, OpExpr::Zero)
    }

    pub fn order(&self) -> usize {
        match self {
            OpExpr::Zero | OpExpr::Scalar(_) => 0,
            OpExpr::Atom(op) => op.order(),
            OpExpr::Sum(terms) => terms.iter().map(OpExpr::order).max().unwrap_or(0),
            OpExpr::Product(factors) => factors.iter().map(OpExpr::order).sum(),
        }
    }

    /// Applies to a jet expanded at (x, y); the result has order K - order().
    pub fn apply_jet(&self, f: &Jet, x: f64, y: f64) -> Jet {
        let out_order = f.order() - self.order();
        match self {
            OpExpr::Zero => Jet::constant(0.0, out_order),
            OpExpr::Scalar(s) => f.scale(*s),
            OpExpr::Atom(op) => op.apply_jet(f, x, y),
            OpExpr::Sum(terms) => {
                let mut acc = Jet::constant(0.0, out_order);
                for t in terms {
                    acc += t.apply_jet(f, x, y);
                }
                acc
            }
            OpExpr::Product(factors) => {
                let mut g = *f;
                for op in factors.iter().rev() {
                    g = op.apply_jet(&g, x, y);
                }
                g
            }
        }
    }

    pub fn apply_grid(&self, f: &GridFunction) -> Result<GridFunction> {
        self.apply_grid_cached(f, &mut GridCache::new())
    }

    /// Stencil application reusing coefficient tables from `cache`.
    pub fn apply_grid_cached(
        &self,
        f: &GridFunction,
        cache: &mut GridCache,
    ) -> Result<GridFunction> {
        match self {
            OpExpr::Zero => Ok(GridFunction::zeros(f.grid)),
            OpExpr::Scalar(s) => Ok(f.scale(*s)),
            OpExpr::Atom(op) => cache.sampled(op, &f.grid)?.apply(f),
            OpExpr::Sum(terms) => {
                let mut acc = GridFunction::zeros(f.grid);
                for t in terms {
                    acc = acc.axpy(1.0, &t.apply_grid_cached(f, cache)?)?;
                }
                Ok(acc)
            }
            OpExpr::Product(factors) => {
                let mut g = f.clone();
                for op in factors.iter().rev() {
                    g = op.apply_grid_cached(&g, cache)?;
                }
                Ok(g)
            }
        }
    }

    /// [a, b] = ab - ba.
    pub fn commutator(a: &OpExpr, b: &OpExpr) -> OpExpr {
        a.clone() * b.clone() - b.clone() * a.clone()
    }

    /// {a, b} = ab + ba.
    pub fn anticommutator(a: &OpExpr, b: &OpExpr) -> OpExpr {
        a.clone() * b.clone() + b.clone() * a.clone()
    }
}

impl From<DiffOp2> for OpExpr {
    fn from(op: DiffOp2) -> Self {
        OpExpr::atom(op)
    }
}

impl From<f64> for OpExpr {
    fn from(s: f64) -> Self {
        OpExpr::Scalar(s)
    }
}

impl Add for OpExpr {
    type Output = OpExpr;
    fn add(self, rhs: OpExpr) -> OpExpr {
        let mut terms = Vec::new();
        for t in [self, rhs] {
            match t {
                OpExpr::Zero => {}
                OpExpr::Sum(inner) => terms.extend(inner),
                other => terms.push(other),
            }
        }
        match terms.len() {
            0 => OpExpr::Zero,
            1 => terms.pop().unwrap(),
            _ => OpExpr::Sum(terms),
        }
    }
}

impl Neg for OpExpr {
    type Output = OpExpr;
    fn neg(self) -> OpExpr {
        -1.0 * self
    }
}

impl Sub for OpExpr {
    type Output = OpExpr;
    fn sub(self, rhs: OpExpr) -> OpExpr {
        self + (-rhs)
    }
}

impl Mul for OpExpr {
    type Output = OpExpr;
    fn mul(self, rhs: OpExpr) -> OpExpr {
        if self.is_zero() || rhs.is_zero() {
            return OpExpr::Zero;
        }
        let mut factors = Vec::new();
        for t in [self, rhs] {
            match t {
                OpExpr::Product(inner) => factors.extend(inner),
                other => factors.push(other),
            }
        }
        OpExpr::Product(factors)
    }
}

impl Mul<OpExpr> for f64 {
    type Output = OpExpr;
    fn mul(self, rhs: OpExpr) -> OpExpr {
        if self == 0.0 || rhs.is_zero() {
            OpExpr::Zero
        } else {
            OpExpr::Scalar(self) * rhs
        }
    }
}

/// A 2×2 matrix of operators acting on two-component functions.
#[derive(Clone, Debug)]
pub struct BlockOp(pub [[OpExpr; 2]; 2]);

impl BlockOp {
    pub fn diag(a: OpExpr, b: OpExpr) -> Self {
        BlockOp([[a, OpExpr::Zero], [OpExpr::Zero, b]])
    }

    pub fn order(&self) -> usize {
        self.0
            .iter()
            .flatten()
            .map(OpExpr::order)
            .max()
            .unwrap_or(0)
    }

    pub fn apply_jet(&self, f: &[Jet; 2], x: f64, y: f64) -> [Jet; 2] {
        let out_order = f[0].order().min(f[1].order()) - self.order();
        let row = |r: usize| {
            let mut acc = Jet::constant(0.0, out_order);
            for (c, fc) in f.iter().enumerate() {
                if !self.0[r][c].is_zero() {
                    acc += self.0[r][c].apply_jet(fc, x, y);
                }
            }
            acc
        };
        [row(0), row(1)]
    }

    pub fn apply_grid(&self, f: &[GridFunction; 2]) -> Result<[GridFunction; 2]> {
        self.apply_grid_cached(f, &mut GridCache::new())
    }

    pub fn apply_grid_cached(
        &self,
        f: &[GridFunction; 2],
        cache: &mut GridCache,
    ) -> Result<[GridFunction; 2]> {
        let mut row = |r: usize| -> Result<GridFunction> {
            let mut acc = GridFunction::zeros(f[0].grid);
            for (c, fc) in f.iter().enumerate() {
                if !self.0[r][c].is_zero() {
                    acc = acc.axpy(1.0, &self.0[r][c].apply_grid_cached(fc, cache)?)?;
                }
            }
            Ok(acc)
        };
        Ok([row(0)?, row(1)?])
    }

    pub fn commutator(a: &BlockOp, b: &BlockOp) -> BlockOp {
        a * b - b * a
    }

    pub fn anticommutator(a: &BlockOp, b: &BlockOp) -> BlockOp {
        a * b + b * a
    }
}

impl Mul for &BlockOp {
    type Output = BlockOp;
    fn mul(self, rhs: &BlockOp) -> BlockOp {
        let entry = |r: usize, c: usize| {
            (0..2).fold(OpExpr::Zero, |acc, m| {
                acc + self.0[r][m].clone() * rhs.0[m][c].clone()
            })
        };
        BlockOp([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }
}

impl Add for BlockOp {
    type Output = BlockOp;
    fn add(self, rhs: BlockOp) -> BlockOp {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        BlockOp([[a + e, b + f], [c + g, d + h]])
    }
}

impl Sub for BlockOp {
    type Output = BlockOp;
    fn sub(self, rhs: BlockOp) -> BlockOp {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        BlockOp([[a - e, b - f], [c - g, d - h]])
    }
}
