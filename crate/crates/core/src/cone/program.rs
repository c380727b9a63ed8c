use std::ops::Range;

/// Sparse linear form `sum coeff * x_var`.
pub type LinearForm = Vec<(usize, f64)>;

/// Affine expression `form . x + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub form: LinearForm,
    pub constant: f64,
}

impl Affine {
    pub fn var(j: usize) -> Self {
        Self {
            form: vec![(j, 1.0)],
            constant: 0.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            form: Vec::new(),
            constant: c,
        }
    }

    pub fn new(form: LinearForm, constant: f64) -> Self {
        Self { form, constant }
    }
}

/// `minimize objective . x` over linear equalities, linear inequalities
/// `form . x <= rhs` and exponential-cone memberships of affine triples.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpConeProgram {
    pub(crate) num_vars: usize,
    pub(crate) objective: Vec<f64>,
    pub(crate) equalities: Vec<(LinearForm, f64)>,
    pub(crate) inequalities: Vec<(LinearForm, f64)>,
    pub(crate) exp_blocks: Vec<[Affine; 3]>,
    pub tolerance: f64,
    pub max_iterations: usize,
}

/// Default accuracy `2^-23`.
pub const DEFAULT_TOLERANCE: f64 = 1.0 / 8_388_608.0;
pub const DEFAULT_MAX_ITERATIONS: usize = 400;

impl Default for ExpConeProgram {
    fn default() -> Self {
        Self::new()
    }
}

impl ExpConeProgram {
    pub fn new() -> Self {
        Self {
            num_vars: 0,
            objective: Vec::new(),
            equalities: Vec::new(),
            inequalities: Vec::new(),
            exp_blocks: Vec::new(),
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        assert!(tolerance > 0.0, "tolerance must be positive");
        self.tolerance = tolerance;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_exp_blocks(&self) -> usize {
        self.exp_blocks.len()
    }

    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.objective.push(0.0);
        self.num_vars - 1
    }

    pub fn add_vars(&mut self, k: usize) -> Range<usize> {
        let start = self.num_vars;
        for _ in 0..k {
            self.add_var();
        }
        start..self.num_vars
    }

    pub fn set_cost(&mut self, var: usize, cost: f64) {
        self.objective[var] = cost;
    }

    pub fn add_eq(&mut self, form: LinearForm, rhs: f64) {
        self.check_form(&form);
        self.equalities.push((form, rhs));
    }

    pub fn add_le(&mut self, form: LinearForm, rhs: f64) {
        self.check_form(&form);
        self.inequalities.push((form, rhs));
    }

    pub fn add_ge(&mut self, form: LinearForm, rhs: f64) {
        let neg = form.into_iter().map(|(j, a)| (j, -a)).collect();
        self.add_le(neg, -rhs);
    }

    pub fn add_nonneg(&mut self, var: usize) {
        self.add_le(vec![(var, -1.0)], 0.0);
    }

    /// Requires `(x, y, z)` to lie in the exponential cone.
    pub fn add_exp(&mut self, x: Affine, y: Affine, z: Affine) {
        for a in [&x, &y, &z] {
            self.check_form(&a.form);
        }
        self.exp_blocks.push([x, y, z]);
    }

    fn check_form(&self, form: &LinearForm) {
        for &(j, a) in form {
            assert!(j < self.num_vars, "variable {j} out of range");
            assert!(a.is_finite(), "non-finite coefficient");
        }
    }

    pub fn evaluate_objective(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

fn eval_form(form: &LinearForm, x: &[f64]) -> f64 {
    form.iter().map(|&(j, a)| a * x[j]).sum()
}

impl Affine {
    pub fn eval(&self, x: &[f64]) -> f64 {
        eval_form(&self.form, x) + self.constant
    }
}

/// Largest violation of the program's constraints at `x`, measured
/// relative to the size of the right-hand sides.
pub fn primal_violation(prog: &ExpConeProgram, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (f, b) in &prog.equalities {
        worst = worst.max((eval_form(f, x) - b).abs() / (1.0 + b.abs()));
    }
    for (f, b) in &prog.inequalities {
        worst = worst.max((eval_form(f, x) - b).max(0.0) / (1.0 + b.abs()));
    }
    for blk in &prog.exp_blocks {
        let v: Vec<f64> = blk.iter().map(|a| a.eval(x)).collect();
        // distance-like violation: y exp(x/y) - z when y > 0
        let viol = if v[1] > 0.0 {
            (v[1] * (v[0] / v[1]).exp() - v[2]).max(0.0)
        } else if v[1] == 0.0 {
            (v[0].max(0.0)) + (-v[2]).max(0.0)
        } else {
            -v[1]
        };
        worst = worst.max(viol / (1.0 + v[2].abs()));
    }
    worst
}
