//! Conic models of the circuit (SONC) and relative entropy (SAGE)
//! relaxations.

use num_traits::Signed;

use super::program::{Affine, ExpConeProgram};
use crate::linalg::Cover;
use crate::poly::SparsePolynomial;
use crate::rational::{self, Rational};

/// Log-domain geometric program over a fixed cover. Circuit `k`, support
/// point `a` owns the variable `u[k][a] = log X` and an epigraph `w >= e^u`.
#[derive(Debug, Clone)]
pub struct SoncModel {
    pub program: ExpConeProgram,
    pub u: Vec<Vec<usize>>,
    pub w: Vec<Vec<usize>>,
    pub direct: bool,
}

impl SoncModel {
    /// Numeric `X` per circuit and support point.
    pub fn extract(&self, x: &[f64]) -> Vec<Vec<f64>> {
        if self.direct {
            self.w
                .iter()
                .map(|row| row.iter().map(|&j| x[j].max(0.0)).collect())
                .collect()
        } else {
            self.u
                .iter()
                .map(|row| row.iter().map(|&j| x[j].exp()).collect())
                .collect()
        }
    }
}

fn coeff_of(p: &SparsePolynomial, exponent: &[i32]) -> Rational {
    p.index_of(exponent)
        .map(|i| p.coeff(i).clone())
        .unwrap_or_default()
}

fn fl(q: &Rational) -> f64 {
    rational::to_f64(q)
}

/// Column constraints `sum_beta X_{beta, alpha} <= b_alpha` over the
/// non-origin support points, given the variable carrying each `X`.
fn add_column_sums(
    prog: &mut ExpConeProgram,
    p: &SparsePolynomial,
    cover: &Cover,
    vars: &[Vec<usize>],
) {
    let mut columns: std::collections::BTreeMap<&[i32], Vec<usize>> = Default::default();
    for (circuit, row) in cover.circuits.iter().zip(vars) {
        for (alpha, &v) in circuit.support.iter().zip(row) {
            if alpha.iter().any(|&e| e != 0) {
                columns.entry(alpha.as_slice()).or_default().push(v);
            }
        }
    }
    for (alpha, vs) in columns {
        prog.add_le(
            vs.iter().map(|&v| (v, 1.0)).collect(),
            fl(&coeff_of(p, alpha)),
        );
    }
}

fn origin_pos(support: &[Vec<i32>]) -> usize {
    support
        .iter()
        .position(|a| a.iter().all(|&e| e == 0))
        .expect("covers always contain the origin")
}

/// GP in log-domain form: `u` free, `(u, 1, w)` in the exponential cone,
/// `sum lambda (u - log lambda) = log |b_beta|` per circuit.
pub fn build_sonc_gp(p: &SparsePolynomial, cover: &Cover, tolerance: f64) -> SoncModel {
    let mut prog = ExpConeProgram::new().with_tolerance(tolerance);
    let mut us = Vec::new();
    let mut ws = Vec::new();
    for circuit in &cover.circuits {
        let k = circuit.support.len();
        let u: Vec<usize> = prog.add_vars(k).collect();
        let w: Vec<usize> = prog.add_vars(k).collect();
        for a in 0..k {
            prog.add_exp(Affine::var(u[a]), Affine::constant(1.0), Affine::var(w[a]));
        }
        let b_abs = coeff_of(p, &circuit.beta).abs();
        let mut rhs = fl(&b_abs).ln();
        let mut form = Vec::with_capacity(k);
        for (a, l) in circuit.lambda.iter().enumerate() {
            let lf = fl(l);
            rhs += lf * lf.ln();
            form.push((u[a], lf));
        }
        prog.add_eq(form, rhs);
        prog.set_cost(w[origin_pos(&circuit.support)], 1.0);
        us.push(u);
        ws.push(w);
    }
    add_column_sums(&mut prog, p, cover, &ws);
    SoncModel {
        program: prog,
        u: us,
        w: ws,
        direct: false,
    }
}

/// The same program in relative entropy form: with `nu = s lambda`,
/// `sum_a nu_a log(nu_a / (e X_a)) <= -|b_beta|`.
pub fn build_sonc_direct(p: &SparsePolynomial, cover: &Cover, tolerance: f64) -> SoncModel {
    let mut prog = ExpConeProgram::new().with_tolerance(tolerance);
    let mut xs = Vec::new();
    for circuit in &cover.circuits {
        let k = circuit.support.len();
        let x: Vec<usize> = prog.add_vars(k).collect();
        let r: Vec<usize> = prog.add_vars(k).collect();
        let s = prog.add_var();
        for a in 0..k {
            let lf = fl(&circuit.lambda[a]);
            prog.add_exp(
                Affine::new(vec![(r[a], -1.0), (s, -lf)], 0.0),
                Affine::new(vec![(s, lf)], 0.0),
                Affine::var(x[a]),
            );
        }
        let b_abs = coeff_of(p, &circuit.beta).abs();
        prog.add_le(r.iter().map(|&j| (j, 1.0)).collect(), -fl(&b_abs));
        prog.set_cost(x[origin_pos(&circuit.support)], 1.0);
        xs.push(x);
    }
    add_column_sums(&mut prog, p, cover, &xs);
    SoncModel {
        program: prog,
        u: Vec::new(),
        w: xs,
        direct: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SageMode {
    /// Maximise the shift `C` with `f - C` in the SAGE cone.
    Optimize,
    /// Decide membership of `f` itself.
    Feasibility,
}

/// Support and coefficients of a signomial with a constant slot, which
/// carries a zero coefficient when the signomial has no constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignomialSupport {
    pub num_vars: usize,
    pub exponents: Vec<Vec<i32>>,
    pub coeffs: Vec<Rational>,
    pub constant: usize,
}

impl SignomialSupport {
    pub fn new(f: &SparsePolynomial) -> Self {
        let mut pairs: Vec<(Vec<i32>, Rational)> = f
            .terms()
            .iter()
            .map(|t| (t.exponent.clone(), t.coeff.clone()))
            .collect();
        let origin = vec![0; f.num_vars()];
        if f.constant_index().is_none() {
            pairs.push((origin.clone(), Rational::default()));
            pairs.sort_by(|a, b| a.0.cmp(&b.0));
        }
        let constant = pairs
            .iter()
            .position(|p| p.0 == origin)
            .expect("constant slot");
        let (exponents, coeffs) = pairs.into_iter().unzip();
        Self {
            num_vars: f.num_vars(),
            exponents,
            coeffs,
            constant,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index sets `(positive, centers)` of the relaxation: the terms blocks
    /// may borrow from, and the block centres.
    pub fn index_sets(&self, mode: SageMode) -> (Vec<usize>, Vec<usize>) {
        let mut positive = Vec::new();
        let mut centers = Vec::new();
        for (i, b) in self.coeffs.iter().enumerate() {
            if mode == SageMode::Optimize && i == self.constant {
                positive.push(i);
                centers.push(i);
            } else if b.is_positive() {
                positive.push(i);
            } else if b.is_negative() {
                centers.push(i);
            }
        }
        (positive, centers)
    }
}

/// One AGE block: the centre index and the positive indices it borrows
/// from, with the variables carrying `c_i`, `nu_i` for each of them.
#[derive(Debug, Clone)]
pub struct SageBlock {
    pub center: usize,
    pub support: Vec<usize>,
    pub c: Vec<usize>,
    pub nu: Vec<usize>,
    /// Variable of `c_center` when it is free (the constant block).
    pub center_var: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SageModel {
    pub program: ExpConeProgram,
    pub data: SignomialSupport,
    pub blocks: Vec<SageBlock>,
    pub bound_var: Option<usize>,
}

/// Relative entropy program of the SAGE relaxation. Blocks are centred at
/// the negative terms and, when optimising, at the constant term whose
/// coefficient `b_0 - C` has unknown sign. Each block borrows only from
/// positive terms; what is left of a positive coefficient forms a trivial
/// block of its own.
pub fn build_sage_rep(f: &SparsePolynomial, mode: SageMode, tolerance: f64) -> SageModel {
    let data = SignomialSupport::new(f);
    let (positive, centers) = data.index_sets(mode);
    let n = data.num_vars;
    let mut prog = ExpConeProgram::new().with_tolerance(tolerance);
    let bound_var = if mode == SageMode::Optimize {
        let v = prog.add_var();
        prog.set_cost(v, -1.0);
        Some(v)
    } else {
        None
    };
    let mut blocks = Vec::with_capacity(centers.len());
    for &j in &centers {
        let support: Vec<usize> = positive.iter().copied().filter(|&i| i != j).collect();
        let free_center = j == data.constant && mode == SageMode::Optimize;
        if free_center && support.is_empty() {
            continue;
        }
        let k = support.len();
        let c: Vec<usize> = prog.add_vars(k).collect();
        let nu: Vec<usize> = prog.add_vars(k).collect();
        let r: Vec<usize> = prog.add_vars(k).collect();
        for a in 0..k {
            prog.add_exp(
                Affine::new(vec![(r[a], -1.0), (nu[a], -1.0)], 0.0),
                Affine::var(nu[a]),
                Affine::var(c[a]),
            );
        }
        // sum_i nu_i (a(i) - a(j)) = 0
        let aj = &data.exponents[j];
        for coord in 0..n {
            let form: Vec<(usize, f64)> = support
                .iter()
                .zip(&nu)
                .map(|(&i, &v)| (v, (data.exponents[i][coord] - aj[coord]) as f64))
                .filter(|p| p.1 != 0.0)
                .collect();
            if !form.is_empty() {
                prog.add_eq(form, 0.0);
            }
        }
        let mut entropy: Vec<(usize, f64)> = r.iter().map(|&v| (v, 1.0)).collect();
        let center_var = if free_center {
            let v = prog.add_var();
            entropy.push((v, -1.0));
            prog.add_le(entropy, 0.0);
            Some(v)
        } else {
            prog.add_le(entropy, fl(&data.coeffs[j]));
            None
        };
        blocks.push(SageBlock {
            center: j,
            support,
            c,
            nu,
            center_var,
        });
    }
    for &i in &positive {
        let mut form: Vec<(usize, f64)> = Vec::new();
        for blk in &blocks {
            if let Some(pos) = blk.support.iter().position(|&s| s == i) {
                form.push((blk.c[pos], 1.0));
            }
            if blk.center == i {
                if let Some(v) = blk.center_var {
                    form.push((v, 1.0));
                }
            }
        }
        if i == data.constant && mode == SageMode::Optimize {
            form.push((bound_var.expect("optimisation mode"), 1.0));
            prog.add_eq(form, fl(&data.coeffs[i]));
        } else if !form.is_empty() {
            prog.add_le(form, fl(&data.coeffs[i]));
        }
    }
    SageModel {
        program: prog,
        data,
        blocks,
        bound_var,
    }
}

/// Numeric block values `(c, nu)` aligned with each block's support.
pub fn extract_sage(model: &SageModel, x: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
    model
        .blocks
        .iter()
        .map(|b| {
            (
                b.c.iter().map(|&v| x[v]).collect(),
                b.nu.iter().map(|&v| x[v]).collect(),
            )
        })
        .collect()
}
