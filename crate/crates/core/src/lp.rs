//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both entering and leaving variables, so the
//! method terminates on degenerate problems and the returned basic solution is
//! a deterministic function of the input. All variables are nonnegative; the
//! objective is minimized.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// `minimize objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn minimize(mut self, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|x| -x).collect(), rel, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let slack_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Eq)
            .count();
        let artificial_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let first_artificial = n + slack_count;
        let width = first_artificial + artificial_count;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack = n;
        let mut artificial = first_artificial;
        for (coeffs, rel, rhs) in normalized {
            let mut row = coeffs;
            row.resize(width + 1, Rational::zero());
            match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            row[width] = rhs;
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            num_vars: n,
            first_artificial,
            width,
        }
    }

    fn run(mut self, objective: &[Rational]) -> LpOutcome {
        if self.first_artificial < self.width {
            let mut phase_one = vec![Rational::zero(); self.width];
            for c in phase_one.iter_mut().skip(self.first_artificial) {
                *c = Rational::one();
            }
            let (_, value) = self
                .optimize(&phase_one, self.width)
                .expect("phase one is bounded below by zero");
            if value.is_positive() {
                return LpOutcome::Infeasible;
            }
            self.expel_artificials();
        }

        let mut cost = objective.to_vec();
        cost.resize(self.width, Rational::zero());
        match self.optimize(&cost, self.first_artificial) {
            None => LpOutcome::Unbounded,
            Some((point, value)) => LpOutcome::Optimal {
                point: point[..self.num_vars].to_vec(),
                value,
            },
        }
    }

    /// Minimizes `cost · x` letting only columns `< allowed` enter the basis.
    /// Returns the full basic solution and the objective value, or `None` if
    /// unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Option<(Vec<Rational>, Rational)> {
        let w = self.width;
        // reduced[j] = cost_j − c_B · column_j ; reduced[w] = −objective value.
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, x) in reduced.iter_mut().zip(row) {
                *r -= cb * x;
            }
        }

        loop {
            let entering = (0..allowed).find(|&j| reduced[j].is_negative());
            let Some(q) = entering else {
                let mut point = vec![Rational::zero(); w];
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    point[b] = row[w].clone();
                }
                return Some((point, -reduced[w].clone()));
            };

            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &row[w] / &row[q];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (p, _) = leave?;
            self.pivot(p, q, &mut reduced);
        }
    }

    fn pivot(&mut self, p: usize, q: usize, reduced: &mut [Rational]) {
        let inv = self.rows[p][q].recip();
        for x in self.rows[p].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[p].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !reduced[q].is_zero() {
            let f = reduced[q].clone();
            for (x, y) in reduced.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[p] = q;
    }

    /// After a feasible phase one, pivots zero-valued artificials out of the
    /// basis and drops rows that turn out to be redundant.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(q) => {
                    let mut scratch = vec![Rational::zero(); self.width + 1];
                    self.pivot(i, q, &mut scratch);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn solves_textbook_maximization() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  →  (2, 6), 36
        let mut lp = LinearProgram::new(2).minimize(vec![int(-3), int(-5)]);
        lp.constrain(vec![int(1), int(0)], Relation::Le, int(4));
        lp.constrain(vec![int(0), int(2)], Relation::Le, int(12));
        lp.constrain(vec![int(3), int(2)], Relation::Le, int(18));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                point: vec![int(2), int(6)],
                value: int(-36)
            }
        );
    }

    #[test]
    fn detects_infeasibility() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![int(1)], Relation::Ge, int(2));
        lp.constrain(vec![int(1)], Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        let mut lp = LinearProgram::new(2).minimize(vec![int(-1), int(0)]);
        lp.constrain(vec![int(1), int(-1)], Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn handles_negative_rhs_and_redundant_equalities() {
        // x + y = 1, 2x + 2y = 2, -x ≤ -1/2  →  minimize y gives y = 0
        let mut lp = LinearProgram::new(2).minimize(vec![int(0), int(1)]);
        lp.constrain(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.constrain(vec![int(2), int(2)], Relation::Eq, int(2));
        lp.constrain(vec![int(-1), int(0)], Relation::Le, rat(-1, 2));
        match lp.solve() {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(value, int(0));
                assert_eq!(point, vec![int(1), int(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4).minimize(vec![rat(-3, 4), int(20), rat(-1, 2), int(6)]);
        lp.constrain(vec![rat(1, 4), int(-8), int(-1), int(9)], Relation::Le, int(0));
        lp.constrain(vec![rat(1, 2), int(-12), rat(-1, 2), int(3)], Relation::Le, int(0));
        lp.constrain(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(-5, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
