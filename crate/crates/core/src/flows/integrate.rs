use std::io::{self, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::system::{vector_field, NambuSystem};
use crate::error::{Error, Result};
use crate::symalg::{CompiledPoly, MultiPoly, VariableTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub method: Method,
    pub dt: f64,
    pub names: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    vars: Arc<VariableTable>,
    phase: Vec<usize>,
    template: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Full evaluation point for sample `i` over the system's table.
    pub fn point(&self, i: usize) -> Vec<f64> {
        let mut p = self.template.clone();
        for (&slot, &v) in self.phase.iter().zip(&self.states[i]) {
            p[slot] = v;
        }
        p
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    /// CSV with header `t,<coords>` and 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,{}", self.names.join(","))?;
        for (t, s) in self.times.iter().zip(&self.states) {
            write!(w, "{t:.16e}")?;
            for v in s {
                write!(w, ",{v:.16e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }
}

/// Fixed-step classical RK4. The number of steps is `round(t_end / dt)`,
/// so sample times are exact multiples of `dt`.
pub fn integrate(sys: &NambuSystem, initial: &[f64], t_end: f64, dt: f64, method: Method) -> Result<Trajectory> {
    let Method::Rk4 = method;
    let n = sys.phase().len();
    if initial.len() != n {
        return Err(Error::Dimension(format!("initial state has {} entries, expected {n}", initial.len())));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Invalid(format!("step must be positive, got {dt}")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::Invalid(format!("t_end must be finite and non-negative, got {t_end}")));
    }
    if initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: 0.0 });
    }
    let template = sys.point_template()?;
    let field: Vec<CompiledPoly> = vector_field(sys).iter().map(MultiPoly::compile).collect();
    let phase = sys.phase().to_vec();
    let steps = (t_end / dt).round() as usize;

    let mut point = template.clone();
    let mut eval = |state: &[f64], out: &mut [f64]| {
        for (&slot, &v) in phase.iter().zip(state) {
            point[slot] = v;
        }
        for (o, f) in out.iter_mut().zip(&field) {
            *o = f.eval(&point);
        }
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(initial.to_vec());
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut y = initial.to_vec();
    for step in 1..=steps {
        eval(&y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        }
        eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        }
        eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + dt * k3[i];
        }
        eval(&tmp, &mut k4);
        for i in 0..n {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = step as f64 * dt;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        times.push(t);
        states.push(y.clone());
    }
    Ok(Trajectory {
        method,
        dt,
        names: sys.phase_names(),
        times,
        states,
        vars: sys.vars().clone(),
        phase,
        template,
    })
}

/// Per integral, `max_s |F(s) − F(s0)| / max(1, |F(s0)|)`.
pub fn conserved_drift(traj: &Trajectory, integrals: &[MultiPoly]) -> Result<Vec<f64>> {
    if traj.is_empty() {
        return Err(Error::Invalid("empty trajectory".into()));
    }
    integrals
        .iter()
        .map(|f| {
            if f.vars() != traj.vars() {
                return Err(Error::TableMismatch);
            }
            let c = f.compile();
            let f0 = c.eval(&traj.point(0));
            let scale = f0.abs().max(1.0);
            let mut worst: f64 = 0.0;
            for i in 1..traj.len() {
                worst = worst.max((c.eval(&traj.point(i)) - f0).abs() / scale);
            }
            Ok(worst)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{parse_poly, ExactScalar};

    fn int(v: i64) -> ExactScalar {
        ExactScalar::from_integer(v.into())
    }

    fn rigid() -> NambuSystem {
        NambuSystem::rigid_body([int(1), int(2), int(3)], int(1)).unwrap()
    }

    #[test]
    fn zero_state_is_fixed() {
        let tr = integrate(&NambuSystem::euler_top(), &[0.0; 3], 1.0, 0.01, Method::Rk4).unwrap();
        assert_eq!(tr.len(), 101);
        assert!(tr.states.iter().all(|s| s.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn times_strictly_increase() {
        let tr = integrate(&rigid(), &[1.0, 0.2, 0.1], 0.5, 0.01, Method::Rk4).unwrap();
        assert!(tr.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rigid_body_conserves_hamiltonians() {
        let sys = rigid();
        let tr = integrate(&sys, &[1.0, 0.2, 0.1], 10.0, 1e-3, Method::Rk4).unwrap();
        let d = conserved_drift(&tr, &sys.hamiltonians()).unwrap();
        assert!(d.iter().all(|&x| x <= 1e-8), "{d:?}");
    }

    #[test]
    fn euler_top_diverges_in_finite_time() {
        // ṁ = (m2m3, m1m3, m1m2) from (1, 0.2, 0.1) blows up near t ≈ 2.616.
        let err = integrate(&NambuSystem::euler_top(), &[1.0, 0.2, 0.1], 10.0, 1e-3, Method::Rk4).unwrap_err();
        match err {
            Error::NonFinite { t } => assert!((2.5..2.7).contains(&t), "t = {t}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_and_non_integral() {
        let sys = NambuSystem::euler_top();
        let tr = integrate(&sys, &[1.0, 0.2, 0.1], 2.0, 1e-3, Method::Rk4).unwrap();
        let one = MultiPoly::one(sys.vars());
        let m1 = parse_poly("m1", sys.vars()).unwrap();
        let d = conserved_drift(&tr, &[one, m1]).unwrap();
        assert_eq!(d[0], 0.0);
        assert!(d[1] > 1e-2);
    }

    #[test]
    fn unbound_constants_rejected() {
        let sys = NambuSystem::rigid_body_symbolic();
        assert!(matches!(
            integrate(&sys, &[1.0, 0.0, 0.0], 1.0, 0.1, Method::Rk4),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn bad_step_rejected() {
        let sys = NambuSystem::euler_top();
        assert!(integrate(&sys, &[1.0, 0.0, 0.0], 1.0, 0.0, Method::Rk4).is_err());
        assert!(integrate(&sys, &[1.0, 0.0], 1.0, 0.1, Method::Rk4).is_err());
    }

    #[test]
    fn csv_layout() {
        let tr = integrate(&NambuSystem::euler_top(), &[0.0, 0.0, 1.0], 0.002, 0.001, Method::Rk4).unwrap();
        let csv = tr.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,m1,m2,m3");
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[1],
            "0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0"
        );
    }
}
