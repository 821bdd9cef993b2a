use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::form::DifferentialForm;
use crate::error::{Error, Result};
use crate::symalg::json::{bad, field};
use crate::symalg::MultiPoly;

/// Form whose coefficients are polynomials in parameters `τ`.
///
/// The parameters live in the form's variable table but are not form
/// coordinates, so `d` and `∧` act coefficientwise in `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormPencil {
    form: DifferentialForm,
    params: Vec<usize>,
}

impl FormPencil {
    pub fn new<S: AsRef<str>>(form: DifferentialForm, params: &[S]) -> Result<Self> {
        let params = params
            .iter()
            .map(|p| form.vars().index_of(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        if params.iter().any(|p| form.coords().contains(p)) {
            return Err(Error::Invalid("a pencil parameter cannot be a form coordinate".into()));
        }
        Ok(Self { form, params })
    }

    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn params(&self) -> &[usize] {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    fn with_form(&self, form: DifferentialForm) -> Self {
        Self {
            form,
            params: self.params.clone(),
        }
    }

    /// Nonzero `τ`-coefficients, keyed by the `τ` exponent vector.
    pub fn members(&self) -> BTreeMap<Vec<u32>, DifferentialForm> {
        let mut out: BTreeMap<Vec<u32>, DifferentialForm> = BTreeMap::new();
        let zero = self.form.map_coeffs(|c| Ok(MultiPoly::zero(c.vars()))).expect("infallible");
        for (key, c) in self.form.terms() {
            for (tau, part) in c.split_by(&self.params) {
                let term = DifferentialForm::monomial(&zero, part, key).expect("same space");
                let slot = out.entry(tau).or_insert_with(|| zero.clone());
                *slot = slot.add(&term).expect("same space and degree");
            }
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.params != other.params {
            return Err(Error::Invalid("pencils use different parameters".into()));
        }
        Ok(self.with_form(self.form.wedge(&other.form)?))
    }

    pub fn power(&self, k: usize) -> Result<Self> {
        Ok(self.with_form(self.form.power(k)?))
    }

    pub fn ext_d(&self) -> Result<Self> {
        Ok(self.with_form(self.form.ext_d()?))
    }

    /// `{"params": [...], "members": [{"tau": [...], "form": <form>}]}`.
    pub fn to_json(&self) -> Value {
        let vars = self.form.vars();
        json!({
            "params": self.params.iter().map(|&p| vars.name(p)).collect::<Vec<_>>(),
            "members": self.members().iter().map(|(tau, f)| json!({"tau": tau, "form": f.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let params: Vec<String> = serde_json::from_value(field(v, "params")?.clone())
            .map_err(|e| bad(format!("params: {e}")))?;
        let members = field(v, "members")?
            .as_array()
            .ok_or_else(|| bad("members must be an array".into()))?;
        let mut acc: Option<DifferentialForm> = None;
        for m in members {
            let tau: Vec<u32> = serde_json::from_value(field(m, "tau")?.clone())
                .map_err(|e| bad(format!("tau: {e}")))?;
            if tau.len() != params.len() {
                return Err(bad(format!("tau {tau:?} must have {} entries", params.len())));
            }
            let f = DifferentialForm::from_json(field(m, "form")?)?;
            let vars = f.vars().clone();
            let mut exps = vec![0; vars.len()];
            for (name, e) in params.iter().zip(&tau) {
                exps[vars.index_of(name)?] = *e;
            }
            let mono = MultiPoly::monomial(&vars, exps, num_traits::One::one());
            let scaled = f.scale_poly(&mono)?;
            acc = Some(match acc {
                None => scaled,
                Some(a) => a.add(&scaled)?,
            });
        }
        let form = acc.ok_or_else(|| bad("a pencil needs at least one member".into()))?;
        Self::new(form, &params)
    }
}

/// Outcome of the three pencil conditions for rank parameter `l`.
#[derive(Debug, Clone)]
pub struct GindikinReport {
    pub l: usize,
    /// `(Ω)^{l+1}`; must vanish.
    pub power_l_plus_1: FormPencil,
    /// A nonzero `τ`-coefficient of `(Ω)^l`, if any.
    pub witness: Option<(Vec<u32>, DifferentialForm)>,
    /// `dΩ`; must vanish.
    pub closedness: FormPencil,
}

impl GindikinReport {
    pub fn passes(&self) -> bool {
        self.power_l_plus_1.is_zero() && self.witness.is_some() && self.closedness.is_zero()
    }
}

pub fn gindikin_check(pencil: &FormPencil, l: usize) -> Result<GindikinReport> {
    if pencil.degree() != 2 {
        return Err(Error::Dimension(format!(
            "Gindikin pencils are 2-forms, got degree {}",
            pencil.degree()
        )));
    }
    let pl = pencil.power(l)?;
    Ok(GindikinReport {
        l,
        power_l_plus_1: pl.wedge(pencil)?,
        witness: pl.members().into_iter().next(),
        closedness: pencil.ext_d()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{parse_poly, VariableTable};

    fn setup() -> DifferentialForm {
        let vars = VariableTable::coordinates(&["x", "y", "xt", "yt", "tau1", "tau2"]).unwrap();
        DifferentialForm::zero_named(&vars, &["x", "y", "xt", "yt"], 2).unwrap()
    }

    fn two(s: &DifferentialForm, c: &str, a: usize, b: usize) -> DifferentialForm {
        DifferentialForm::monomial(s, parse_poly(c, s.vars()).unwrap(), &[a, b]).unwrap()
    }

    #[test]
    fn two_block_pencil_needs_rank_two() {
        let s = setup();
        let om = two(&s, "tau1", 0, 1).add(&two(&s, "tau2", 2, 3)).unwrap();
        let pencil = FormPencil::new(om, &["tau1", "tau2"]).unwrap();
        let r1 = gindikin_check(&pencil, 1).unwrap();
        assert!(!r1.passes());
        let sq = r1.power_l_plus_1.members();
        assert_eq!(sq.len(), 1);
        let (tau, vol) = sq.iter().next().unwrap();
        assert_eq!(tau, &vec![1, 1]);
        assert_eq!(vol.coefficient(&[0, 1, 2, 3]), MultiPoly::integer(s.vars(), 2));

        let r2 = gindikin_check(&pencil, 2).unwrap();
        assert!(r2.passes());
        assert_eq!(r2.witness.unwrap().0, vec![1, 1]);
    }

    #[test]
    fn single_block_is_rank_one() {
        let s = setup();
        let pencil = FormPencil::new(two(&s, "tau1", 0, 1), &["tau1", "tau2"]).unwrap();
        let r = gindikin_check(&pencil, 1).unwrap();
        assert!(r.passes());
        assert_eq!(r.witness.unwrap().0, vec![1, 0]);
    }

    #[test]
    fn non_closed_pencil_fails() {
        let s = setup();
        let pencil = FormPencil::new(two(&s, "tau1*xt", 0, 1), &["tau1", "tau2"]).unwrap();
        let r = gindikin_check(&pencil, 1).unwrap();
        assert!(!r.closedness.is_zero());
        assert!(!r.passes());
    }

    #[test]
    fn members_and_json() {
        let s = setup();
        let om = two(&s, "tau1^2*x + 3*tau2", 0, 2).add(&two(&s, "tau1^2", 1, 3)).unwrap();
        let pencil = FormPencil::new(om, &["tau1", "tau2"]).unwrap();
        let m = pencil.members();
        assert_eq!(m.keys().cloned().collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(m[&vec![2, 0]].num_terms(), 2);
        let back = FormPencil::from_json(&pencil.to_json()).unwrap();
        assert_eq!(back, pencil);
    }

    #[test]
    fn rejects_wrong_degree_and_coordinate_params() {
        let s = setup();
        let dx = DifferentialForm::basis(&s, "x").unwrap();
        let p = FormPencil::new(dx.clone(), &["tau1"]).unwrap();
        assert!(gindikin_check(&p, 1).is_err());
        assert!(FormPencil::new(dx, &["x"]).is_err());
    }
}
