//! Homogeneous self-dual interior-point method for
//! `min c.x  s.t.  A x + s = b,  s in {0}^p x R+^q x K_exp^r`.
//!
//! The exponential-cone blocks are scaled with the primal barrier Hessian
//! `mu H(s)`, the nonnegative rows with the usual `z / s`. Steps are taken
//! inside a neighborhood of the central path measured by the local norm of
//! `z / mu + g(s)`; when progress stalls a pure centering step is tried.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use super::expcone::{self, CENTRAL};
use super::program::ExpConeProgram;

#[derive(Debug, Clone, PartialEq)]
pub struct NumericSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
}

impl NumericSolution {
    pub fn max_residual(&self) -> f64 {
        self.primal_residual.max(self.dual_residual).max(self.gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    MaxIterations,
    IllConditioned,
    InfeasibleDetected,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FailureReason::MaxIterations => "max-iterations",
            FailureReason::IllConditioned => "ill-conditioning",
            FailureReason::InfeasibleDetected => "infeasible-detected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cone solver failed ({reason}) after {iterations} iterations: {detail}")]
pub struct SolverFailure {
    pub reason: FailureReason,
    pub iterations: usize,
    pub detail: String,
}

type SparseRow = Vec<(usize, f64)>;

/// Program data in standard form after equilibration.
struct Standard {
    n: usize,
    m_eq: usize,
    m_lp: usize,
    m_exp: usize,
    rows: Vec<SparseRow>,
    b: Vec<f64>,
    c: Vec<f64>,
    row_scale: Vec<f64>,
    col_scale: Vec<f64>,
    b_norm: f64,
    c_norm: f64,
}

impl Standard {
    fn m(&self) -> usize {
        self.m_eq + self.m_lp + 3 * self.m_exp
    }

    fn lp_range(&self) -> std::ops::Range<usize> {
        self.m_eq..self.m_eq + self.m_lp
    }

    fn exp_start(&self) -> usize {
        self.m_eq + self.m_lp
    }

    fn build(prog: &ExpConeProgram) -> Self {
        let n = prog.num_vars;
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for (f, rhs) in &prog.equalities {
            rows.push(merge(f));
            b.push(*rhs);
        }
        for (f, rhs) in &prog.inequalities {
            rows.push(merge(f));
            b.push(*rhs);
        }
        for blk in &prog.exp_blocks {
            for a in blk {
                // s = constant - (-form) x
                rows.push(merge(&a.form).into_iter().map(|(j, v)| (j, -v)).collect());
                b.push(a.constant);
            }
        }
        let b_norm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let c_norm = prog.objective.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut s = Self {
            n,
            m_eq: prog.equalities.len(),
            m_lp: prog.inequalities.len(),
            m_exp: prog.exp_blocks.len(),
            rows,
            b,
            c: prog.objective.clone(),
            row_scale: Vec::new(),
            col_scale: Vec::new(),
            b_norm,
            c_norm,
        };
        s.equilibrate();
        s
    }

    /// Ruiz scaling; the three rows of an exponential block share a factor
    /// so that the cone is preserved.
    fn equilibrate(&mut self) {
        let m = self.m();
        let mut d = vec![1.0; m];
        let mut e = vec![1.0; self.n];
        for _ in 0..12 {
            let mut row_norm = vec![0.0f64; m];
            let mut col_norm = vec![0.0f64; self.n];
            for (i, row) in self.rows.iter().enumerate() {
                for &(j, v) in row {
                    row_norm[i] = row_norm[i].max(v.abs());
                    col_norm[j] = col_norm[j].max(v.abs());
                }
            }
            let es = self.exp_start();
            for k in 0..self.m_exp {
                let r = es + 3 * k;
                let mx = row_norm[r].max(row_norm[r + 1]).max(row_norm[r + 2]);
                row_norm[r..r + 3].iter_mut().for_each(|v| *v = mx);
            }
            let rf: Vec<f64> = row_norm
                .iter()
                .map(|&v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 })
                .collect();
            let cf: Vec<f64> = col_norm
                .iter()
                .map(|&v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 })
                .collect();
            for (i, row) in self.rows.iter_mut().enumerate() {
                for (j, v) in row.iter_mut() {
                    *v *= rf[i] * cf[*j];
                }
            }
            for i in 0..m {
                d[i] *= rf[i];
            }
            for j in 0..self.n {
                e[j] *= cf[j];
            }
        }
        for i in 0..m {
            self.b[i] *= d[i];
        }
        for j in 0..self.n {
            self.c[j] *= e[j];
        }
        self.row_scale = d;
        self.col_scale = e;
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    fn mul_t(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (row, &zi) in self.rows.iter().zip(z) {
            if zi == 0.0 {
                continue;
            }
            for &(j, v) in row {
                out[j] += v * zi;
            }
        }
        out
    }
}

fn merge(form: &[(usize, f64)]) -> SparseRow {
    let mut out: SparseRow = Vec::with_capacity(form.len());
    let mut sorted = form.to_vec();
    sorted.sort_by_key(|p| p.0);
    for (j, v) in sorted {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|p| p.1 != 0.0);
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone)]
struct Iterate {
    x: Vec<f64>,
    s: Vec<f64>,
    z: Vec<f64>,
    tau: f64,
    kappa: f64,
}

struct Direction {
    dx: Vec<f64>,
    ds: Vec<f64>,
    dz: Vec<f64>,
    dtau: f64,
    dkappa: f64,
}

/// Scaling blocks and the factored reduced system for one iteration.
struct Factored {
    lp_w: Vec<f64>,
    exp_w: Vec<Matrix3<f64>>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    kkt: DMatrix<f64>,
}

struct Solver<'a> {
    st: &'a Standard,
    nu: f64,
}

const GAMMA_LP: f64 = 1e-3;
const BETA_EXP: f64 = 0.95;
const MIN_STEP: f64 = 0.05;

impl<'a> Solver<'a> {
    fn mu(&self, it: &Iterate) -> f64 {
        let start = self.st.m_eq;
        (dot(&it.s[start..], &it.z[start..]) + it.tau * it.kappa) / (self.nu + 1.0)
    }

    fn interior(&self, it: &Iterate) -> bool {
        if !(it.tau > 0.0 && it.kappa > 0.0) {
            return false;
        }
        for i in self.st.lp_range() {
            if !(it.s[i] > 0.0 && it.z[i] > 0.0) {
                return false;
            }
        }
        let es = self.st.exp_start();
        for k in 0..self.st.m_exp {
            let r = es + 3 * k;
            if !expcone::in_primal_interior(&it.s[r..r + 3])
                || !expcone::in_dual_interior(&it.z[r..r + 3])
            {
                return false;
            }
        }
        true
    }

    fn in_neighborhood(&self, it: &Iterate, beta: f64) -> bool {
        let mu = self.mu(it);
        if !(mu > 0.0) || it.tau * it.kappa < GAMMA_LP * mu {
            return false;
        }
        for i in self.st.lp_range() {
            if it.s[i] * it.z[i] < GAMMA_LP * mu {
                return false;
            }
        }
        let es = self.st.exp_start();
        for k in 0..self.st.m_exp {
            let r = es + 3 * k;
            if expcone::proximity(&it.s[r..r + 3], &it.z[r..r + 3], mu) > beta {
                return false;
            }
        }
        true
    }

    fn factor(&self, it: &Iterate, mu: f64) -> Option<Factored> {
        let st = self.st;
        let n = st.n;
        let dim = n + st.m_eq;
        let mut kkt = DMatrix::<f64>::zeros(dim, dim);
        let lp_w: Vec<f64> = st.lp_range().map(|i| it.z[i] / it.s[i]).collect();
        for (k, i) in st.lp_range().enumerate() {
            let w = lp_w[k];
            let row = &st.rows[i];
            for &(p, vp) in row {
                for &(q, vq) in row {
                    kkt[(p, q)] += w * vp * vq;
                }
            }
        }
        let es = st.exp_start();
        let mut exp_w = Vec::with_capacity(st.m_exp);
        for k in 0..st.m_exp {
            let r = es + 3 * k;
            let w = expcone::hessian(&it.s[r..r + 3]) * mu;
            for a in 0..3 {
                for bb in 0..3 {
                    let wab = w[(a, bb)];
                    if wab == 0.0 {
                        continue;
                    }
                    for &(p, vp) in &st.rows[r + a] {
                        for &(q, vq) in &st.rows[r + bb] {
                            kkt[(p, q)] += vp * wab * vq;
                        }
                    }
                }
            }
            exp_w.push(w);
        }
        for i in 0..st.m_eq {
            for &(j, v) in &st.rows[i] {
                kkt[(n + i, j)] += v;
                kkt[(j, n + i)] += v;
            }
        }
        let diag_max = (0..n).fold(1.0f64, |m, j| m.max(kkt[(j, j)].abs()));
        let reg = 1e-18 * diag_max;
        let mut reg_kkt = kkt.clone();
        for j in 0..n {
            reg_kkt[(j, j)] += reg;
        }
        for i in 0..st.m_eq {
            reg_kkt[(n + i, n + i)] -= reg;
        }
        let lu = reg_kkt.lu();
        if !lu.is_invertible() {
            return None;
        }
        Some(Factored {
            lp_w,
            exp_w,
            lu,
            kkt,
        })
    }

    fn solve_reduced(&self, f: &Factored, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut sol = f.lu.solve(rhs)?;
        // iterative refinement against the unregularized matrix
        for _ in 0..10 {
            let res = rhs - &f.kkt * &sol;
            if res.amax() <= 1e-14 * (1.0 + rhs.amax()) {
                break;
            }
            let corr = f.lu.solve(&res)?;
            sol += corr;
        }
        if sol.iter().all(|v| v.is_finite()) {
            Some(sol)
        } else {
            None
        }
    }

    /// Search direction targeting `sigma mu` while reducing residuals by
    /// `eta`.
    fn direction(
        &self,
        it: &Iterate,
        f: &Factored,
        res: &Residuals,
        mu: f64,
        sigma: f64,
        eta: f64,
    ) -> Option<Direction> {
        let st = self.st;
        let n = st.n;
        let m = st.m();
        let es = st.exp_start();
        // h = W q on cone rows
        let mut h = vec![0.0; m];
        for i in st.lp_range() {
            h[i] = -it.z[i] + sigma * mu / it.s[i];
        }
        for k in 0..st.m_exp {
            let r = es + 3 * k;
            let g = expcone::gradient(&it.s[r..r + 3]);
            for a in 0..3 {
                h[r + a] = -it.z[r + a] - sigma * mu * g[a];
            }
        }
        // u = eta W r2 + h on cone rows
        let mut u = vec![0.0; m];
        let mut wb = vec![0.0; m];
        for (k, i) in st.lp_range().enumerate() {
            u[i] = eta * f.lp_w[k] * res.r2[i] + h[i];
            wb[i] = f.lp_w[k] * st.b[i];
        }
        for k in 0..st.m_exp {
            let r = es + 3 * k;
            let w = &f.exp_w[k];
            let r2 = Vector3::new(res.r2[r], res.r2[r + 1], res.r2[r + 2]);
            let bv = Vector3::new(st.b[r], st.b[r + 1], st.b[r + 2]);
            let wr = w * r2;
            let wbv = w * bv;
            for a in 0..3 {
                u[r + a] = eta * wr[a] + h[r + a];
                wb[r + a] = wbv[a];
            }
        }
        let atu = st.mul_t(&u);
        let atwb = st.mul_t(&wb);
        let mut rhs1 = DVector::zeros(n + st.m_eq);
        let mut rhs2 = DVector::zeros(n + st.m_eq);
        for j in 0..n {
            rhs1[j] = -eta * res.r1[j] - atu[j];
            rhs2[j] = -st.c[j] + atwb[j];
        }
        for i in 0..st.m_eq {
            rhs1[n + i] = -eta * res.r2[i];
            rhs2[n + i] = st.b[i];
        }
        let v1 = self.solve_reduced(f, &rhs1)?;
        let v2 = self.solve_reduced(f, &rhs2)?;
        let dx1: Vec<f64> = v1.rows(0, n).iter().copied().collect();
        let dx2: Vec<f64> = v2.rows(0, n).iter().copied().collect();
        let adx1 = st.mul(&dx1);
        let adx2 = st.mul(&dx2);
        // dz on cone rows: z1 + dtau z2
        let mut z1 = vec![0.0; m];
        let mut z2 = vec![0.0; m];
        for i in 0..st.m_eq {
            z1[i] = v1[n + i];
            z2[i] = v2[n + i];
        }
        for (k, i) in st.lp_range().enumerate() {
            z1[i] = f.lp_w[k] * adx1[i] + u[i];
            z2[i] = f.lp_w[k] * adx2[i] - wb[i];
        }
        for k in 0..st.m_exp {
            let r = es + 3 * k;
            let w = &f.exp_w[k];
            let a1 = w * Vector3::new(adx1[r], adx1[r + 1], adx1[r + 2]);
            let a2 = w * Vector3::new(adx2[r], adx2[r + 1], adx2[r + 2]);
            for a in 0..3 {
                z1[r + a] = a1[a] + u[r + a];
                z2[r + a] = a2[a] - wb[r + a];
            }
        }
        let num = -eta * res.r3
            - (sigma * mu - it.tau * it.kappa) / it.tau
            - dot(&st.c, &dx1)
            - dot(&st.b, &z1);
        let den = dot(&st.c, &dx2) + dot(&st.b, &z2) - it.kappa / it.tau;
        if den == 0.0 || !den.is_finite() {
            return None;
        }
        let dtau = num / den;
        let dx: Vec<f64> = dx1.iter().zip(&dx2).map(|(a, b)| a + dtau * b).collect();
        let dz: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| a + dtau * b).collect();
        let adx = st.mul(&dx);
        let mut ds = vec![0.0; m];
        for i in st.m_eq..m {
            ds[i] = -adx[i] + st.b[i] * dtau - eta * res.r2[i];
        }
        let dkappa = (sigma * mu - it.tau * it.kappa - it.kappa * dtau) / it.tau;
        let d = Direction {
            dx,
            ds,
            dz,
            dtau,
            dkappa,
        };
        if d.dx.iter().chain(&d.ds).chain(&d.dz).all(|v| v.is_finite()) && dkappa.is_finite() {
            Some(d)
        } else {
            None
        }
    }

    fn step(&self, it: &Iterate, d: &Direction, alpha: f64) -> Iterate {
        let ax = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(u, v)| u + alpha * v)
                .collect::<Vec<_>>()
        };
        Iterate {
            x: ax(&it.x, &d.dx),
            s: ax(&it.s, &d.ds),
            z: ax(&it.z, &d.dz),
            tau: it.tau + alpha * d.dtau,
            kappa: it.kappa + alpha * d.dkappa,
        }
    }

    /// Largest step for the nonnegative parts by the ratio test.
    fn max_linear_step(&self, it: &Iterate, d: &Direction) -> f64 {
        let mut a = f64::INFINITY;
        let mut test = |v: f64, dv: f64| {
            if dv < 0.0 {
                a = a.min(-v / dv);
            }
        };
        test(it.tau, d.dtau);
        test(it.kappa, d.dkappa);
        for i in self.st.lp_range() {
            test(it.s[i], d.ds[i]);
            test(it.z[i], d.dz[i]);
        }
        a
    }

    /// Backtracking search for the largest acceptable step.
    fn line_search(
        &self,
        it: &Iterate,
        d: &Direction,
        beta: Option<f64>,
    ) -> Option<(f64, Iterate)> {
        let mut alpha = (0.99 * self.max_linear_step(it, d)).min(1.0);
        while alpha > 1e-10 {
            let next = self.step(it, d, alpha);
            if self.interior(&next) && beta.is_none_or(|b| self.in_neighborhood(&next, b)) {
                return Some((alpha, next));
            }
            alpha *= 0.8;
        }
        None
    }
}

struct Residuals {
    r1: Vec<f64>,
    r2: Vec<f64>,
    r3: f64,
}

fn residuals(st: &Standard, it: &Iterate) -> Residuals {
    let atz = st.mul_t(&it.z);
    let r1: Vec<f64> = atz.iter().zip(&st.c).map(|(a, c)| a + c * it.tau).collect();
    let ax = st.mul(&it.x);
    let r2: Vec<f64> = (0..st.m())
        .map(|i| ax[i] + it.s[i] - st.b[i] * it.tau)
        .collect();
    let r3 = dot(&st.c, &it.x) + dot(&st.b, &it.z) + it.kappa;
    Residuals { r1, r2, r3 }
}

struct Status {
    pres: f64,
    dres: f64,
    gap: f64,
}

fn status(st: &Standard, it: &Iterate, res: &Residuals) -> Status {
    let pres = (0..st.m())
        .map(|i| (res.r2[i] / st.row_scale[i]).abs())
        .fold(0.0f64, f64::max)
        / it.tau
        / (1.0 + st.b_norm);
    let dres = (0..st.n)
        .map(|j| (res.r1[j] / st.col_scale[j]).abs())
        .fold(0.0f64, f64::max)
        / it.tau
        / (1.0 + st.c_norm);
    let pobj = dot(&st.c, &it.x) / it.tau;
    let dobj = -dot(&st.b, &it.z) / it.tau;
    let gap = (pobj - dobj).abs() / (1.0 + pobj.abs().min(dobj.abs()));
    Status { pres, dres, gap }
}

pub fn solve_expcone(prog: &ExpConeProgram) -> Result<NumericSolution, SolverFailure> {
    let st = Standard::build(prog);
    let m = st.m();
    let n = st.n;
    let solver = Solver {
        st: &st,
        nu: (st.m_lp + 3 * st.m_exp) as f64,
    };
    let mut it = Iterate {
        x: vec![0.0; n],
        s: vec![0.0; m],
        z: vec![0.0; m],
        tau: 1.0,
        kappa: 1.0,
    };
    for i in st.lp_range() {
        it.s[i] = 1.0;
        it.z[i] = 1.0;
    }
    let es = st.exp_start();
    for k in 0..st.m_exp {
        for a in 0..3 {
            it.s[es + 3 * k + a] = CENTRAL[a];
            it.z[es + 3 * k + a] = CENTRAL[a];
        }
    }
    let tol = prog.tolerance;
    let fail = |reason, iterations, detail: String| SolverFailure {
        reason,
        iterations,
        detail,
    };
    let mut best: Option<(f64, Iterate)> = None;
    let mut centred = false;
    for iter in 0..prog.max_iterations {
        let res = residuals(&st, &it);
        let stat = status(&st, &it, &res);
        let worst = stat.pres.max(stat.dres).max(stat.gap);
        if best.as_ref().is_none_or(|(w, _)| worst < *w) {
            best = Some((worst, it.clone()));
        }
        if worst <= tol {
            return Ok(finish(prog, &st, &it, stat, iter));
        }
        if let Some(reason) = infeasibility(&st, &it, tol) {
            return Err(fail(FailureReason::InfeasibleDetected, iter, reason));
        }
        let mu = solver.mu(&it);
        let Some(factored) = solver.factor(&it, mu) else {
            return Err(fail(
                FailureReason::IllConditioned,
                iter,
                "singular reduced system".into(),
            ));
        };
        let Some(affine) = solver.direction(&it, &factored, &res, mu, 0.0, 1.0) else {
            return Err(fail(
                FailureReason::IllConditioned,
                iter,
                "affine direction not finite".into(),
            ));
        };
        let alpha_aff = solver
            .line_search(&it, &affine, None)
            .map_or(0.0, |(a, _)| a);
        let sigma = (1.0 - alpha_aff).powi(3).clamp(1e-4, 1.0);
        let combined = solver.direction(&it, &factored, &res, mu, sigma, 1.0 - sigma);
        let accepted = combined
            .as_ref()
            .and_then(|d| solver.line_search(&it, d, Some(BETA_EXP)));
        match accepted {
            Some((alpha, next)) if alpha > MIN_STEP => {
                it = next;
                centred = false;
            }
            _ => {
                // a second stall in a row: leave the neighborhood rather than
                // recentre forever
                let free = if centred {
                    combined
                        .as_ref()
                        .and_then(|d| solver.line_search(&it, d, None))
                        .filter(|(alpha, _)| *alpha > MIN_STEP)
                } else {
                    None
                };
                if let Some((_, next)) = free {
                    it = next;
                    centred = false;
                } else {
                    // recentre without reducing residuals
                    let centering = solver
                        .direction(&it, &factored, &res, mu, 1.0, 0.0)
                        .and_then(|d| {
                            solver
                                .line_search(&it, &d, Some(BETA_EXP))
                                .or_else(|| solver.line_search(&it, &d, None))
                        });
                    match (centering, accepted) {
                        (Some((_, next)), _) => it = next,
                        (None, Some((_, next))) => it = next,
                        (None, None) => {
                            return near_optimal(prog, &st, best, tol, iter).ok_or_else(|| {
                                fail(
                                    FailureReason::IllConditioned,
                                    iter,
                                    "no acceptable step".into(),
                                )
                            });
                        }
                    }
                    centred = true;
                }
            }
        }
        // keep the homogeneous scale bounded
        let scale = it.tau.max(it.kappa);
        if !(1e-8..=1e8).contains(&scale) {
            let f = 1.0 / scale;
            it.x.iter_mut()
                .chain(it.s.iter_mut())
                .chain(it.z.iter_mut())
                .for_each(|v| *v *= f);
            it.tau *= f;
            it.kappa *= f;
        }
    }
    near_optimal(prog, &st, best, tol, prog.max_iterations).ok_or_else(|| {
        fail(
            FailureReason::MaxIterations,
            prog.max_iterations,
            "iteration cap reached".into(),
        )
    })
}

/// Accepts the best iterate seen when it is within the tolerance already
/// (numerical stalls near the optimum are common at tight tolerances).
fn near_optimal(
    prog: &ExpConeProgram,
    st: &Standard,
    best: Option<(f64, Iterate)>,
    tol: f64,
    iter: usize,
) -> Option<NumericSolution> {
    let (worst, it) = best?;
    if worst <= tol {
        let res = residuals(st, &it);
        Some(finish(prog, st, &it, status(st, &it, &res), iter))
    } else {
        None
    }
}

fn infeasibility(st: &Standard, it: &Iterate, tol: f64) -> Option<String> {
    let btz = dot(&st.b, &it.z);
    if btz < 0.0 {
        let atz = st.mul_t(&it.z);
        let unscaled = (0..st.n)
            .map(|j| (atz[j] / st.col_scale[j]).abs())
            .fold(0.0f64, f64::max);
        if unscaled <= tol * (-btz) && it.tau <= tol * 1e-3 * it.kappa.max(1.0) {
            return Some("dual ray certifies primal infeasibility".into());
        }
    }
    let ctx = dot(&st.c, &it.x);
    if ctx < 0.0 {
        let ax = st.mul(&it.x);
        let lin = (0..st.m())
            .map(|i| ((ax[i] + it.s[i]) / st.row_scale[i]).abs())
            .fold(0.0f64, f64::max);
        if lin <= tol * (-ctx) && it.tau <= tol * 1e-3 * it.kappa.max(1.0) {
            return Some("primal ray certifies dual infeasibility".into());
        }
    }
    None
}

fn finish(
    prog: &ExpConeProgram,
    st: &Standard,
    it: &Iterate,
    stat: Status,
    iterations: usize,
) -> NumericSolution {
    let x: Vec<f64> = (0..st.n)
        .map(|j| it.x[j] * st.col_scale[j] / it.tau)
        .collect();
    NumericSolution {
        objective: prog.evaluate_objective(&x),
        x,
        primal_residual: stat.pres,
        dual_residual: stat.dres,
        gap: stat.gap,
        iterations,
    }
}
