use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nambu::{nambu_bracket, BracketSpace};
use crate::symalg::scalar::to_f64;
use crate::symalg::{parse_poly, ExactScalar, MultiPoly, VariableTable};

/// Phase coordinates plus `n − 1` Hamiltonians.
///
/// Every table variable that is not a phase coordinate is a symbolic
/// constant; flows never differentiate along it. Constants may be bound to
/// rationals for numeric runs. A reciprocal pair `(a, r)` records the
/// relation `a·r = 1` so fields containing `1/a` stay polynomial.
#[derive(Debug, Clone)]
pub struct NambuSystem {
    vars: Arc<VariableTable>,
    phase: Vec<usize>,
    hamiltonians: Vec<MultiPoly>,
    bindings: BTreeMap<usize, ExactScalar>,
    reciprocals: Vec<(usize, usize)>,
}

impl NambuSystem {
    pub fn new<S: AsRef<str>>(
        vars: &Arc<VariableTable>,
        phase: &[S],
        hamiltonians: Vec<MultiPoly>,
    ) -> Result<Self> {
        let phase = phase
            .iter()
            .map(|p| vars.index_of(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        BracketSpace::from_indices(vars, phase.clone())?;
        if hamiltonians.len() + 1 != phase.len() {
            return Err(Error::Arity {
                expected: phase.len() - 1,
                got: hamiltonians.len(),
            });
        }
        if hamiltonians.iter().any(|h| h.vars() != vars) {
            return Err(Error::TableMismatch);
        }
        Ok(Self {
            vars: vars.clone(),
            phase,
            hamiltonians,
            bindings: BTreeMap::new(),
            reciprocals: Vec::new(),
        })
    }

    /// Declares `reciprocal = 1/var`. Binding `var` later also binds the
    /// reciprocal; a zero value is rejected.
    pub fn with_reciprocal(mut self, var: &str, reciprocal: &str) -> Result<Self> {
        let a = self.vars.index_of(var)?;
        let r = self.vars.index_of(reciprocal)?;
        self.reciprocals.push((a, r));
        Ok(self)
    }

    pub fn bind(mut self, name: &str, value: ExactScalar) -> Result<Self> {
        let v = self.vars.index_of(name)?;
        if self.phase.contains(&v) {
            return Err(Error::Invalid(format!("`{name}` is a phase coordinate")));
        }
        for &(a, r) in &self.reciprocals {
            if a == v {
                if value.is_zero() {
                    return Err(Error::Degenerate(format!(
                        "`{name}` = 0 but its reciprocal `{}` is required",
                        self.vars.name(r)
                    )));
                }
                self.bindings.insert(r, value.recip());
            }
        }
        self.bindings.insert(v, value);
        Ok(self)
    }

    /// Rigid body with feedback torque about the major axis: phase
    /// `(m1, m2, m3)`, symbolic constants `a1, a2, a3, k` and `a1_inv`,
    ///
    /// `H1 = ½(a2 m1² − a1 m2²)`, `H2 = ½((a3 − k)/a1 · m1² − m3²)`.
    pub fn rigid_body_symbolic() -> Self {
        let vars = VariableTable::coordinates(&["m1", "m2", "m3", "a1", "a2", "a3", "k", "a1_inv"])
            .expect("distinct names");
        let h1 = parse_poly("1/2*(a2*m1^2 - a1*m2^2)", &vars).expect("valid");
        let h2 = parse_poly("1/2*((a3 - k)*a1_inv*m1^2 - m3^2)", &vars).expect("valid");
        Self::new(&vars, &["m1", "m2", "m3"], vec![h1, h2])
            .and_then(|s| s.with_reciprocal("a1", "a1_inv"))
            .expect("well-formed system")
    }

    /// Rigid body for principal moments `inertia` and feedback gain `k`:
    /// `a1 = 1/I2 − 1/I3`, `a2 = 1/I3 − 1/I1`, `a3 = 1/I1 − 1/I2`.
    /// Fails when `I2 = I3` (then `a1 = 0` and `H2` is undefined).
    pub fn rigid_body(inertia: [ExactScalar; 3], k: ExactScalar) -> Result<Self> {
        if inertia.iter().any(Zero::is_zero) {
            return Err(Error::Degenerate("principal moments must be nonzero".into()));
        }
        let inv: Vec<ExactScalar> = inertia.iter().map(|i| i.recip()).collect();
        let a1 = &inv[1] - &inv[2];
        let a2 = &inv[2] - &inv[0];
        let a3 = &inv[0] - &inv[1];
        Self::with_coefficients(a1, a2, a3, k)
    }

    /// Rigid-body equations with the coefficients `a_i` given directly.
    pub fn with_coefficients(a1: ExactScalar, a2: ExactScalar, a3: ExactScalar, k: ExactScalar) -> Result<Self> {
        Self::rigid_body_symbolic()
            .bind("a1", a1)?
            .bind("a2", a2)?
            .bind("a3", a3)?
            .bind("k", k)
    }

    /// Scalar Euler top: `a1 = a2 = a3 = 1`, `k = 0`.
    pub fn euler_top() -> Self {
        Self::with_coefficients(One::one(), One::one(), One::one(), Zero::zero())
            .expect("a1 = 1 is nondegenerate")
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn phase(&self) -> &[usize] {
        &self.phase
    }

    pub fn phase_names(&self) -> Vec<String> {
        self.phase.iter().map(|&p| self.vars.name(p).to_string()).collect()
    }

    pub fn space(&self) -> BracketSpace {
        BracketSpace::from_indices(&self.vars, self.phase.clone()).expect("validated in new")
    }

    pub fn bindings(&self) -> &BTreeMap<usize, ExactScalar> {
        &self.bindings
    }

    /// Hamiltonians with the bound constants substituted.
    pub fn hamiltonians(&self) -> Vec<MultiPoly> {
        self.hamiltonians.iter().map(|h| self.specialize(h)).collect()
    }

    /// Reduces reciprocal pairs and substitutes bound constants.
    pub fn specialize(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = p.clone();
        for &(a, r) in &self.reciprocals {
            out = out.reduce_reciprocal(a, r);
        }
        for (&v, q) in &self.bindings {
            out = out
                .substitute(v, &MultiPoly::constant(&self.vars, q.clone()))
                .expect("same table");
        }
        out
    }

    /// Full evaluation point with constants filled in and phase slots zero.
    /// Errors if a constant the system uses is unbound.
    pub(crate) fn point_template(&self) -> Result<Vec<f64>> {
        let mut point = vec![0.0; self.vars.len()];
        for h in &self.hamiltonians {
            let h = self.specialize(h);
            for v in 0..self.vars.len() {
                if h.depends_on(v) && !self.phase.contains(&v) {
                    return Err(Error::Invalid(format!(
                        "constant `{}` must be bound for numeric integration",
                        self.vars.name(v)
                    )));
                }
            }
        }
        for (&v, q) in &self.bindings {
            point[v] = to_f64(q);
        }
        Ok(point)
    }
}

/// Nambu-Hamiltonian vector field: component `i` is `{H1,…,H(n−1), x_i}`.
///
/// For n = 3 this is the cyclic reordering `{x_i, H1, H2} = {H1, H2, x_i}`
/// (an even permutation), so both written conventions agree; fixing the
/// state argument last avoids a sign ambiguity for even n.
pub fn vector_field(sys: &NambuSystem) -> Vec<MultiPoly> {
    let space = sys.space();
    let hams = sys.hamiltonians();
    sys.phase
        .iter()
        .map(|&x| {
            let mut args = hams.clone();
            args.push(MultiPoly::var_index(&sys.vars, x));
            let b = nambu_bracket(&args, &space).expect("arity checked in new");
            sys.specialize(&b)
        })
        .collect()
}

/// `Σ_i ∂ field_i / ∂ coords_i`.
pub fn divergence(field: &[MultiPoly], coords: &[usize]) -> Result<MultiPoly> {
    if field.len() != coords.len() {
        return Err(Error::Dimension(format!(
            "{} components for {} coordinates",
            field.len(),
            coords.len()
        )));
    }
    let vars = field
        .first()
        .map(|f| f.vars().clone())
        .ok_or_else(|| Error::Invalid("empty vector field".into()))?;
    let mut acc = MultiPoly::zero(&vars);
    for (f, &x) in field.iter().zip(coords) {
        acc = acc.checked_add(&f.partial(x))?;
    }
    Ok(acc)
}
