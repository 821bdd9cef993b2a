use std::sync::Arc;

use super::form::DifferentialForm;
use super::pencil::FormPencil;
use crate::error::Result;
use crate::symalg::{MultiPoly, Variable, VariableTable};

/// Potential coordinates; `xt`, `yt` stand for x̃, ỹ.
pub const PLEBANSKI_COORDS: [&str; 4] = ["x", "y", "xt", "yt"];

/// Table `x, y, xt, yt, lambda`.
pub fn plebanski_table() -> Arc<VariableTable> {
    VariableTable::coordinates(&["x", "y", "xt", "yt", "lambda"]).expect("distinct names")
}

struct Hessian {
    xxt: MultiPoly,
    xyt: MultiPoly,
    yxt: MultiPoly,
    yyt: MultiPoly,
}

fn mixed_hessian(omega: &MultiPoly) -> Result<Hessian> {
    let d = |a: &str, b: &str| -> Result<MultiPoly> { omega.partial_by_name(a)?.partial_by_name(b) };
    Ok(Hessian {
        xxt: d("x", "xt")?,
        xyt: d("x", "yt")?,
        yxt: d("y", "xt")?,
        yyt: d("y", "yt")?,
    })
}

/// `Ω_{xx̃} Ω_{yỹ} − Ω_{xỹ} Ω_{yx̃} − 1`.
pub fn plebanski_residual(omega: &MultiPoly) -> Result<MultiPoly> {
    let h = mixed_hessian(omega)?;
    let det = (&h.xxt * &h.yyt) - (&h.xyt * &h.yxt);
    Ok(det - MultiPoly::one(omega.vars()))
}

/// `dx∧dy + λ(Ω_{xx̃} dx∧dx̃ + Ω_{xỹ} dx∧dỹ + Ω_{yx̃} dy∧dx̃ + Ω_{yỹ} dy∧dỹ)
/// + λ² dx̃∧dỹ`, with `λ` a pencil parameter. `omega` is re-embedded into
/// [`plebanski_table`] when its table lacks `lambda`.
pub fn plebanski_pencil_form(omega: &MultiPoly) -> Result<FormPencil> {
    let omega = if omega.vars().find("lambda").is_some() {
        omega.clone()
    } else {
        let mut vars: Vec<Variable> = omega.vars().variables().to_vec();
        vars.push(Variable::coordinate("lambda"));
        omega.reembed(&VariableTable::new(vars)?)?
    };
    let vars = omega.vars().clone();
    let s = DifferentialForm::zero_named(&vars, &PLEBANSKI_COORDS, 2)?;
    let lam = MultiPoly::var(&vars, "lambda")?;
    let h = mixed_hessian(&omega)?;
    let mono = |c: MultiPoly, a: usize, b: usize| DifferentialForm::monomial(&s, c, &[a, b]);
    let mid = mono(h.xxt, 0, 2)?
        .add(&mono(h.xyt, 0, 3)?)?
        .add(&mono(h.yxt, 1, 2)?)?
        .add(&mono(h.yyt, 1, 3)?)?;
    let form = mono(MultiPoly::one(&vars), 0, 1)?
        .add(&mid.scale_poly(&lam)?)?
        .add(&mono(lam.pow(2), 2, 3)?)?;
    FormPencil::new(form, &["lambda"])
}

#[derive(Debug, Clone)]
pub struct PencilResiduals {
    pub closedness: FormPencil,
    pub wedge_square: FormPencil,
}

impl PencilResiduals {
    pub fn is_zero(&self) -> bool {
        self.closedness.is_zero() && self.wedge_square.is_zero()
    }

    /// Coefficient of `λ^k` in `Ω(λ)∧Ω(λ)` on `dx∧dy∧dx̃∧dỹ`.
    pub fn wedge_square_volume(&self, k: u32) -> MultiPoly {
        let f = self.wedge_square.form();
        self.wedge_square
            .members()
            .get(&vec![k])
            .map(|m| m.coefficient(&[0, 1, 2, 3]))
            .unwrap_or_else(|| MultiPoly::zero(f.vars()))
    }
}

/// `dΩ(λ)` and `Ω(λ)∧Ω(λ)`; the `λ²` volume coefficient of the latter is
/// `−2` times [`plebanski_residual`].
pub fn plebanski_pencil(omega: &MultiPoly) -> Result<PencilResiduals> {
    let pencil = plebanski_pencil_form(omega)?;
    Ok(PencilResiduals {
        closedness: pencil.ext_d()?,
        wedge_square: pencil.wedge(&pencil)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::gindikin_check;
    use crate::symalg::parse_poly;

    fn om(s: &str) -> MultiPoly {
        let vars = VariableTable::coordinates(&PLEBANSKI_COORDS).unwrap();
        parse_poly(s, &vars).unwrap()
    }

    #[test]
    fn residual_examples() {
        assert!(plebanski_residual(&om("x*xt + y*yt")).unwrap().is_zero());
        assert!(plebanski_residual(&om("x*xt + y*yt + x^3*y - 2*y^2")).unwrap().is_zero());
        assert_eq!(plebanski_residual(&om("2*x*xt + y*yt")).unwrap(), MultiPoly::one(om("x").vars()));
    }

    #[test]
    fn pencil_of_solutions_vanishes() {
        for s in ["x*xt + y*yt", "x*xt + y*yt + x^2*y"] {
            assert!(plebanski_pencil(&om(s)).unwrap().is_zero(), "{s}");
        }
    }

    #[test]
    fn scaled_potential_leaves_lambda_squared_witness() {
        let r = plebanski_pencil(&om("2*x*xt + y*yt")).unwrap();
        assert!(r.closedness.is_zero());
        let w = r.wedge_square_volume(2);
        assert_eq!(w, MultiPoly::integer(w.vars(), -2));
        assert_eq!(r.wedge_square.members().len(), 1);
    }

    #[test]
    fn non_solution_closedness_still_holds() {
        let r = plebanski_pencil(&om("x^2*xt*yt + y^3*xt")).unwrap();
        assert!(r.closedness.is_zero());
        assert!(!r.wedge_square.is_zero());
    }

    #[test]
    fn pencil_passes_gindikin_rank_one() {
        let p = plebanski_pencil_form(&om("x*xt + y*yt + x*y^2")).unwrap();
        assert!(gindikin_check(&p, 1).unwrap().passes());
    }
}
