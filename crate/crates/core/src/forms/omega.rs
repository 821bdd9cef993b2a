use super::form::DifferentialForm;
use crate::error::Result;
use crate::hierarchy::VpTriple;
use crate::symalg::{LaurentObject, MultiPoly};

/// Form space of a triple: every table variable `λ, p, q, t1..tK` is a
/// coordinate, and the series are read as polynomials in `λ`.
struct Space {
    zero: DifferentialForm,
    lambda: usize,
    times: Vec<usize>,
}

impl Space {
    fn of(triple: &VpTriple) -> Result<Self> {
        let vars = triple.vars();
        let zero = DifferentialForm::zero(vars, (0..vars.len()).collect(), 0)?;
        let times = (1..)
            .map_while(|n| vars.find(&format!("t{n}")))
            .collect();
        Ok(Self {
            zero,
            lambda: vars.index_of("lambda")?,
            times,
        })
    }

    fn poly(&self, s: &LaurentObject) -> Result<MultiPoly> {
        s.to_poly(self.lambda)
    }

    fn d(&self, f: &MultiPoly) -> Result<DifferentialForm> {
        DifferentialForm::differential(&self.zero, f)
    }

    fn dname(&self, name: &str) -> Result<DifferentialForm> {
        DifferentialForm::basis(&self.zero, name)
    }

    fn dt(&self, n: usize) -> Result<DifferentialForm> {
        self.d(&MultiPoly::var_index(self.zero.vars(), self.times[n - 1]))
    }
}

fn wedge3(a: &DifferentialForm, b: &DifferentialForm, c: &DifferentialForm) -> Result<DifferentialForm> {
    a.wedge(b)?.wedge(c)
}

/// `Ω = dλ∧dp∧dq + Σ_{n=1}^{K} dB_{1n}∧dB_{2n}∧dt_n`.
pub fn omega3_form(triple: &VpTriple) -> Result<DifferentialForm> {
    let s = Space::of(triple)?;
    let mut omega = wedge3(&s.dname("lambda")?, &s.dname("p")?, &s.dname("q")?)?;
    for n in 1..=s.times.len() {
        let (b1, b2) = triple.generators(n)?;
        let term = wedge3(&s.d(&s.poly(&b1)?)?, &s.d(&s.poly(&b2)?)?, &s.dt(n)?)?;
        omega = omega.add(&term)?;
    }
    Ok(omega)
}

#[derive(Debug, Clone)]
pub struct Omega3Residuals {
    /// `dΩ`.
    pub closedness: DifferentialForm,
    /// `Ω∧Ω`.
    pub wedge_square: DifferentialForm,
    /// `Ω − dL∧dM∧dN`.
    pub theorem31: DifferentialForm,
}

impl Omega3Residuals {
    pub fn is_zero(&self) -> bool {
        self.closedness.is_zero() && self.wedge_square.is_zero() && self.theorem31.is_zero()
    }
}

pub fn omega3_check(triple: &VpTriple) -> Result<Omega3Residuals> {
    let s = Space::of(triple)?;
    let omega = omega3_form(triple)?;
    let lmn = wedge3(
        &s.d(&s.poly(&triple.l)?)?,
        &s.d(&s.poly(&triple.m)?)?,
        &s.d(&s.poly(&triple.n)?)?,
    )?;
    Ok(Omega3Residuals {
        closedness: omega.ext_d()?,
        wedge_square: omega.wedge(&omega)?,
        theorem31: omega.sub(&lmn)?,
    })
}

/// `d(M dL∧dN + λ dp∧dq + Σ_{n=1}^{K} B_{1n} dB_{2n}∧dt_n)`, which equals
/// `Ω − dL∧dM∧dN`.
pub fn krichever_closedness(triple: &VpTriple) -> Result<DifferentialForm> {
    let s = Space::of(triple)?;
    let (l, m, n) = (s.poly(&triple.l)?, s.poly(&triple.m)?, s.poly(&triple.n)?);
    let lam = MultiPoly::var_index(s.zero.vars(), s.lambda);
    let mut theta = s.d(&l)?.wedge(&s.d(&n)?)?.scale_poly(&m)?;
    theta = theta.add(&s.dname("p")?.wedge(&s.dname("q")?)?.scale_poly(&lam)?)?;
    for k in 1..=s.times.len() {
        let (b1, b2) = triple.generators(k)?;
        let term = s.d(&s.poly(&b2)?)?.wedge(&s.dt(k)?)?.scale_poly(&s.poly(&b1)?)?;
        theta = theta.add(&term)?;
    }
    theta.ext_d()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{vacuum_solution, vp_table};
    use crate::symalg::parse_poly;

    #[test]
    fn vacuum_satisfies_all_form_identities() {
        for depth in 1..=3 {
            let v = vacuum_solution(depth).unwrap();
            let r = omega3_check(&v).unwrap();
            assert!(r.is_zero(), "K={depth}: {}", r.theorem31);
            assert!(krichever_closedness(&v).unwrap().is_zero());
            assert!(omega3_form(&v).unwrap().ext_d().unwrap().is_zero());
        }
    }

    #[test]
    fn omega_shape_for_k3() {
        let v = vacuum_solution(3).unwrap();
        let om = omega3_form(&v).unwrap();
        // dλ∧dp∧dq, dλ∧dp∧dt1, 4λp dλ∧dp∧dt2, 9λ²p² dλ∧dp∧dt3.
        assert_eq!(om.num_terms(), 4);
        assert_eq!(om.coefficient(&[0, 1, 4]), parse_poly("4*lambda*p", v.vars()).unwrap());
        assert_eq!(om.coefficient(&[0, 1, 5]), parse_poly("9*lambda^2*p^2", v.vars()).unwrap());
    }

    #[test]
    fn perturbed_triple_gives_witness() {
        let v = vacuum_solution(2).unwrap();
        let eps = parse_poly("3*q^2", v.vars()).unwrap();
        let n = v.n.add(&LaurentObject::constant(eps)).unwrap();
        let bad = VpTriple::new(v.l.clone(), v.m.clone(), n).unwrap();
        let r = omega3_check(&bad).unwrap();
        assert!(r.closedness.is_zero() && r.wedge_square.is_zero());
        assert_eq!(r.theorem31.num_terms(), 1);
        assert_eq!(r.theorem31.coefficient(&[0, 1, 2]), parse_poly("-6*q", v.vars()).unwrap());
    }

    #[test]
    fn krichever_detects_non_solution() {
        let vars = vp_table(2);
        let p = |s: &str| parse_poly(s, &vars).unwrap();
        let t = VpTriple::new(
            LaurentObject::lambda_power(&vars, 1),
            LaurentObject::constant(p("p")),
            LaurentObject::monomial(p("q"), 1),
        )
        .unwrap();
        let k = krichever_closedness(&t).unwrap();
        assert!(!k.is_zero());
        assert_eq!(k, omega3_check(&t).unwrap().theorem31);
    }

    #[test]
    fn negative_powers_are_rejected() {
        let vars = vp_table(1);
        let t = VpTriple::new(
            LaurentObject::lambda_power(&vars, 1),
            LaurentObject::lambda_power(&vars, -1),
            LaurentObject::one(&vars),
        )
        .unwrap();
        assert!(omega3_check(&t).is_err());
    }
}
