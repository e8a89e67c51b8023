//! The BLP and AIP relaxations as certified deciders, plus the GAC
//! front-end wired into a single promise-solver entry point.

use crate::conditions::{generate_condition, ConditionKind};
use crate::core::{PromiseTemplate, Structure};
use crate::freestruct::width1_check;
use crate::homsearch::{gac, SearchOpts};
use crate::indicator::check_condition_in_pol;
use crate::{Error, Result, SizeCap};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde_json::json;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    RationalNonneg,
    Integer,
}

/// Sparse integer-coefficient equation system over a named variable
/// catalogue.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub mode: Mode,
    pub vars: Vec<String>,
    /// (coefficient, variable index) terms = constant.
    pub eqs: Vec<(Vec<(i64, usize)>, i64)>,
}

impl LinearSystem {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (terms, c) in &self.eqs {
            let words: Vec<String> = terms
                .iter()
                .map(|(k, v)| format!("{}*{}", k, self.vars[*v]))
                .collect();
            writeln!(out, "{} = {}", words.join(" "), c).unwrap();
        }
        out
    }
}

fn emit_system(i: &Structure, a: &Structure, mode: Mode, boolean_eliminate: bool) -> Result<LinearSystem> {
    if !i.similar_to(a) {
        return Err(Error::Invalid("structures are not similar".into()));
    }
    let d = a.domain_size;
    let mut vars = Vec::new();
    let unary = |v: usize, x: usize| v * d + x;
    for v in 0..i.domain_size {
        for x in 0..d {
            vars.push(format!("mu[{}][{}]", v, x));
        }
    }
    let mut eqs: Vec<(Vec<(i64, usize)>, i64)> = Vec::new();
    for v in 0..i.domain_size {
        eqs.push(((0..d).map(|x| (1, unary(v, x))).collect(), 1));
    }
    for (r, scopes) in i.relations.iter().enumerate() {
        let rel_name = &a.signature.relations[r].name;
        let tuples = &a.relations[r];
        for scope in scopes {
            // One weight per template tuple; off-relation weights are
            // pinned to zero by omission.
            let base = vars.len();
            let scope_txt: Vec<String> = scope.iter().map(|v| v.to_string()).collect();
            for t in 0..tuples.len() {
                vars.push(format!("mu[{}][{}][{}]", scope_txt.join(","), rel_name, t));
            }
            if tuples.is_empty() {
                // Empty template relation: the constraint is unsatisfiable;
                // emit the contradictory normalization 0 = 1.
                eqs.push((Vec::new(), 1));
                continue;
            }
            eqs.push(((0..tuples.len()).map(|t| (1, base + t)).collect(), 1));
            for (pos, &v) in scope.iter().enumerate() {
                for x in 0..d {
                    let mut terms: Vec<(i64, usize)> = tuples
                        .iter()
                        .enumerate()
                        .filter(|(_, tup)| tup[pos] == x)
                        .map(|(t, _)| (1, base + t))
                        .collect();
                    terms.push((-1, unary(v, x)));
                    eqs.push((terms, 0));
                }
            }
        }
    }
    let mut sys = LinearSystem { mode, vars, eqs };
    if boolean_eliminate {
        if d != 2 {
            return Err(Error::Invalid("boolean elimination needs |A| = 2".into()));
        }
        eliminate_boolean(&mut sys, i.domain_size);
    }
    Ok(sys)
}

/// Substitute mu[v][0] = 1 - mu[v][1] for every instance element and drop
/// the now-trivial normalization rows (the Boolean single-variable rewrite).
fn eliminate_boolean(sys: &mut LinearSystem, n_elems: usize) {
    let gone = |var: usize| var < 2 * n_elems && var % 2 == 0;
    let mut eqs = Vec::new();
    for (terms, mut c) in sys.eqs.drain(..) {
        let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
        for (k, v) in terms {
            if gone(v) {
                // k * (1 - mu[v][1]) moves k to the constant side.
                c -= k;
                *acc.entry(v + 1).or_insert(0) -= k;
            } else {
                *acc.entry(v).or_insert(0) += k;
            }
        }
        let terms: Vec<(i64, usize)> =
            acc.into_iter().filter(|&(_, k)| k != 0).map(|(v, k)| (k, v)).collect();
        if terms.is_empty() && c == 0 {
            continue;
        }
        eqs.push((terms, c));
    }
    sys.eqs = eqs;
    // Eliminated variables stay in the catalogue so indices keep meaning;
    // they simply no longer occur in any equation.
}

pub fn emit_blp(i: &Structure, a: &Structure) -> Result<LinearSystem> {
    emit_system(i, a, Mode::RationalNonneg, false)
}

pub fn emit_blp_opts(i: &Structure, a: &Structure, boolean_eliminate: bool) -> Result<LinearSystem> {
    emit_system(i, a, Mode::RationalNonneg, boolean_eliminate)
}

pub fn emit_aip(i: &Structure, a: &Structure) -> Result<LinearSystem> {
    emit_system(i, a, Mode::Integer, false)
}

pub fn emit_aip_opts(i: &Structure, a: &Structure, boolean_eliminate: bool) -> Result<LinearSystem> {
    emit_system(i, a, Mode::Integer, boolean_eliminate)
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Feasible(Vec<BigRational>),
    /// One multiplier per equation: the combination has nonpositive
    /// coefficients on every variable but a positive constant.
    Infeasible(Vec<BigRational>),
}

#[derive(Debug, Clone)]
pub enum IpOutcome {
    Feasible(Vec<BigInt>),
    /// One rational multiplier per equation: the combination has integer
    /// coefficients on every variable but a non-integer constant.
    Infeasible(Vec<BigRational>),
}

fn dense(sys: &LinearSystem) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = sys.vars.len();
    let rows = sys
        .eqs
        .iter()
        .map(|(terms, _)| {
            let mut row = vec![BigRational::zero(); n];
            for (k, v) in terms {
                row[*v] += BigRational::from_integer(BigInt::from(*k));
            }
            row
        })
        .collect();
    let b = sys
        .eqs
        .iter()
        .map(|(_, c)| BigRational::from_integer(BigInt::from(*c)))
        .collect();
    (rows, b)
}

/// Exact phase-1 simplex with Bland's rule; always terminates with either a
/// nonnegative solution or a Farkas certificate, both re-verified here.
pub fn lp_feasible(sys: &LinearSystem) -> Result<LpOutcome> {
    if sys.mode != Mode::RationalNonneg {
        return Err(Error::Invalid("lp_feasible needs a rational-nonneg system".into()));
    }
    let (mut rows, mut b) = dense(sys);
    let m = rows.len();
    let n = sys.vars.len();
    for i in 0..m {
        if b[i] < BigRational::zero() {
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    // Tableau columns: n structural + m artificial + rhs.
    let width = n + m + 1;
    let mut tab: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![BigRational::zero(); width];
            row[..n].clone_from_slice(&rows[i]);
            row[n + i] = BigRational::one();
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    // Phase-1 objective: minimize the artificial sum. With the artificial
    // basis, the reduced-cost row is the negated column sums.
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut cost = vec![BigRational::zero(); width];
    for j in 0..width {
        for i in 0..m {
            cost[j] -= tab[i][j].clone();
        }
    }
    for bj in n..n + m {
        cost[bj] = BigRational::zero();
    }
    loop {
        // Bland: lowest-index column with negative reduced cost.
        let enter = (0..n + m).find(|&j| cost[j] < BigRational::zero());
        let enter = match enter {
            Some(j) => j,
            None => break,
        };
        // Ratio test, ties broken by lowest basis variable.
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter] > BigRational::zero() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ri = &tab[i][width - 1] / &tab[i][enter];
                        let rl = &tab[l][width - 1] / &tab[l][enter];
                        ri < rl || (ri == rl && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let leave = match leave {
            Some(l) => l,
            // Phase-1 objective is bounded below; an unbounded column
            // cannot happen, but guard anyway.
            None => return Err(Error::Invalid("phase-1 simplex unbounded".into())),
        };
        let piv = tab[leave][enter].clone();
        for x in tab[leave].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..m {
            if i != leave && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..width {
                    let delta = &f * &tab[leave][j];
                    tab[i][j] -= delta;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..width {
                let delta = &f * &tab[leave][j];
                cost[j] -= delta;
            }
        }
        basis[leave] = enter;
    }
    let objective: BigRational = (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| tab[i][width - 1].clone())
        .sum();
    if objective.is_zero() {
        let mut x = vec![BigRational::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = tab[i][width - 1].clone();
            }
        }
        for (i, (row, bi)) in rows.iter().zip(&b).enumerate() {
            let lhs: BigRational = row.iter().zip(&x).map(|(a, v)| a * v).sum();
            if lhs != *bi {
                return Err(Error::Invalid(format!("LP solution violates equation {}", i)));
            }
        }
        if x.iter().any(|v| v < &BigRational::zero()) {
            return Err(Error::Invalid("LP solution went negative".into()));
        }
        Ok(LpOutcome::Feasible(x))
    } else {
        // y_i = 1 - (reduced cost of artificial i), against the
        // sign-normalized rows; fold the normalization back in.
        let mut y: Vec<BigRational> = (0..m)
            .map(|i| BigRational::one() - &cost[n + i])
            .collect();
        for i in 0..m {
            let (_, c) = &sys.eqs[i];
            if BigRational::from_integer(BigInt::from(*c)) != b[i] {
                y[i] = -y[i].clone();
            }
        }
        let (orig_rows, orig_b) = dense(sys);
        for j in 0..n {
            let coef: BigRational = (0..m).map(|i| &y[i] * &orig_rows[i][j]).sum();
            if coef > BigRational::zero() {
                return Err(Error::Invalid("Farkas certificate failed on a variable".into()));
            }
        }
        let rhs: BigRational = (0..m).map(|i| &y[i] * &orig_b[i]).sum();
        if rhs <= BigRational::zero() {
            return Err(Error::Invalid("Farkas certificate has nonpositive rhs".into()));
        }
        Ok(LpOutcome::Infeasible(y))
    }
}

/// Diagonalize A into S·A·T = D with unimodular S, T (a Smith-style
/// reduction; the divisibility chain is not needed for solvability).
fn diagonalize(
    mut a: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut s: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    for k in 0..m.min(n) {
        loop {
            // Smallest-magnitude pivot in the remaining block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    if !a[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => return (a, s, t),
            };
            a.swap(k, pi);
            s.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in t.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..m {
                if !a[i][k].is_zero() {
                    let q = div_round(&a[i][k], &a[k][k]);
                    for j in 0..n {
                        let delta = &q * &a[k][j];
                        a[i][j] -= delta;
                    }
                    for j in 0..m {
                        let delta = &q * &s[k][j];
                        s[i][j] -= delta;
                    }
                    if !a[i][k].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    let q = div_round(&a[k][j], &a[k][k]);
                    for i in 0..m {
                        let delta = &q * &a[i][k];
                        a[i][j] -= delta;
                    }
                    // Mirror the column operation on T: col_j -= q * col_k.
                    for row in t.iter_mut() {
                        let delta = &q * &row[k];
                        row[j] -= delta;
                    }
                    if !a[k][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean
                && (k + 1..m).all(|i| a[i][k].is_zero())
                && (k + 1..n).all(|j| a[k][j].is_zero())
            {
                break;
            }
        }
    }
    (a, s, t)
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Round-toward-nearest quotient keeps remainders small.
    let two = BigInt::from(2);
    let (q, r) = num::Integer::div_mod_floor(a, b);
    if &r * &two >= b.abs() {
        q + 1
    } else {
        q
    }
}

/// Complete integer feasibility via the diagonal form; the certificate is a
/// rational combination of the equations with integer coefficients on every
/// variable and a non-integer constant.
pub fn ip_feasible(sys: &LinearSystem) -> Result<IpOutcome> {
    if sys.mode != Mode::Integer {
        return Err(Error::Invalid("ip_feasible needs an integer system".into()));
    }
    let m = sys.eqs.len();
    let n = sys.vars.len();
    let a: Vec<Vec<BigInt>> = sys
        .eqs
        .iter()
        .map(|(terms, _)| {
            let mut row = vec![BigInt::zero(); n];
            for (k, v) in terms {
                row[*v] += BigInt::from(*k);
            }
            row
        })
        .collect();
    let b: Vec<BigInt> = sys.eqs.iter().map(|(_, c)| BigInt::from(*c)).collect();
    let (d, s, t) = diagonalize(a.clone(), m, n);
    let sb: Vec<BigInt> = (0..m)
        .map(|i| (0..m).map(|j| &s[i][j] * &b[j]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        let di = if i < n { d[i][i].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !sb[i].is_zero() {
                // u = S_i / (2 * (Sb)_i): u^T A = 0, u^T b = 1/2.
                let scale = BigRational::new(BigInt::one(), 2 * sb[i].clone());
                let cert: Vec<BigRational> = (0..m)
                    .map(|j| &scale * BigRational::from_integer(s[i][j].clone()))
                    .collect();
                return verified_ip_infeasible(sys, cert);
            }
        } else if !num::Integer::is_multiple_of(&sb[i], &di) {
            let cert: Vec<BigRational> = (0..m)
                .map(|j| BigRational::new(s[i][j].clone(), di.clone()))
                .collect();
            return verified_ip_infeasible(sys, cert);
        } else {
            y[i] = &sb[i] / &di;
        }
    }
    let x: Vec<BigInt> = (0..n)
        .map(|i| (0..n).map(|j| &t[i][j] * &y[j]).sum())
        .collect();
    for (i, (terms, c)) in sys.eqs.iter().enumerate() {
        let lhs: BigInt = terms.iter().map(|(k, v)| BigInt::from(*k) * &x[*v]).sum();
        if lhs != BigInt::from(*c) {
            return Err(Error::Invalid(format!("IP solution violates equation {}", i)));
        }
    }
    Ok(IpOutcome::Feasible(x))
}

fn verified_ip_infeasible(sys: &LinearSystem, cert: Vec<BigRational>) -> Result<IpOutcome> {
    let n = sys.vars.len();
    let mut coef = vec![BigRational::zero(); n];
    let mut rhs = BigRational::zero();
    for (i, (terms, c)) in sys.eqs.iter().enumerate() {
        for (k, v) in terms {
            coef[*v] += &cert[i] * BigRational::from_integer(BigInt::from(*k));
        }
        rhs += &cert[i] * BigRational::from_integer(BigInt::from(*c));
    }
    if coef.iter().any(|c| !c.is_integer()) || rhs.is_integer() {
        return Err(Error::Invalid("lattice obstruction failed verification".into()));
    }
    Ok(IpOutcome::Infeasible(cert))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gac,
    Blp,
    Aip,
}

/// The relaxation verdict plus a soundness annotation for the promise side.
#[derive(Debug, Clone)]
pub struct PromiseVerdict {
    pub yes: bool,
    /// When does "yes" transfer to a B-homomorphism guarantee.
    pub soundness: String,
    pub certificate: serde_json::Value,
}

pub fn solve_promise(
    t: &PromiseTemplate,
    i: &Structure,
    method: Method,
    opts: &SearchOpts,
    cap: &SizeCap,
) -> Result<PromiseVerdict> {
    match method {
        Method::Gac => {
            let domains = gac(i, &t.a)?;
            let yes = domains.is_some();
            let soundness = match width1_check(t, cap, opts) {
                Ok((true, _)) => "yes answers certified: template has width 1".to_string(),
                Ok((false, _)) => "yes answers not certified: template lacks width 1".to_string(),
                Err(e) => format!("width-1 status unknown: {}", e),
            };
            let certificate = match &domains {
                Some(d) => json!({"kind": "gac-domains", "domains": d.candidates}),
                None => json!({"kind": "gac-wipeout"}),
            };
            Ok(PromiseVerdict { yes, soundness, certificate })
        }
        Method::Blp => {
            let sys = emit_blp(i, &t.a)?;
            let soundness = symmetric_annotation(t, opts, cap);
            match lp_feasible(&sys)? {
                LpOutcome::Feasible(x) => Ok(PromiseVerdict {
                    yes: true,
                    soundness,
                    certificate: json!({
                        "kind": "lp-solution",
                        "values": rationals_json(&sys, &x),
                    }),
                }),
                LpOutcome::Infeasible(y) => Ok(PromiseVerdict {
                    yes: false,
                    soundness,
                    certificate: json!({
                        "kind": "lp-farkas",
                        "multipliers": y.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    }),
                }),
            }
        }
        Method::Aip => {
            let sys = emit_aip(i, &t.a)?;
            let soundness = alternating_annotation(t, opts, cap);
            match ip_feasible(&sys)? {
                IpOutcome::Feasible(x) => Ok(PromiseVerdict {
                    yes: true,
                    soundness,
                    certificate: json!({
                        "kind": "ip-solution",
                        "values": sys
                            .vars
                            .iter()
                            .zip(&x)
                            .map(|(v, val)| (v.clone(), val.to_string()))
                            .collect::<std::collections::BTreeMap<_, _>>(),
                    }),
                }),
                IpOutcome::Infeasible(u) => Ok(PromiseVerdict {
                    yes: false,
                    soundness,
                    certificate: json!({
                        "kind": "ip-obstruction",
                        "multipliers": u.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    }),
                }),
            }
        }
    }
}

fn rationals_json(sys: &LinearSystem, x: &[BigRational]) -> serde_json::Value {
    let map: std::collections::BTreeMap<String, String> = sys
        .vars
        .iter()
        .zip(x)
        .map(|(v, val)| (v.clone(), val.to_string()))
        .collect();
    json!(map)
}

fn symmetric_annotation(t: &PromiseTemplate, opts: &SearchOpts, cap: &SizeCap) -> String {
    for l in 2..=3usize {
        let c = match generate_condition(ConditionKind::Symmetric(l)) {
            Ok(c) => c,
            Err(e) => return format!("symmetric check unavailable: {}", e),
        };
        match check_condition_in_pol(&c, t, opts, cap) {
            Ok(out) if out.is_sat() => {}
            Ok(_) => {
                return format!(
                    "yes answers not certified: no symmetric polymorphism of arity {}",
                    l
                )
            }
            Err(e) => return format!("symmetric status unknown at arity {}: {}", l, e),
        }
    }
    "yes answers supported: symmetric polymorphisms verified at arities 2..3".to_string()
}

fn alternating_annotation(t: &PromiseTemplate, opts: &SearchOpts, cap: &SizeCap) -> String {
    let c = match generate_condition(ConditionKind::Alternating(3)) {
        Ok(c) => c,
        Err(e) => return format!("alternating check unavailable: {}", e),
    };
    match check_condition_in_pol(&c, t, opts, cap) {
        Ok(out) if out.is_sat() => {
            "yes answers supported: alternating polymorphism verified at arity 3".to_string()
        }
        Ok(_) => "yes answers not certified: no alternating polymorphism of arity 3".to_string(),
        Err(e) => format!("alternating status unknown: {}", e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{clique, nae, one_in_three, Signature};
    use crate::homsearch::find_hom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn instance(tmpl: &Structure, n: usize, scopes: Vec<Vec<usize>>) -> Structure {
        let mut rels: Vec<Vec<Vec<usize>>> = vec![Vec::new(); tmpl.signature.relations.len()];
        rels[0] = scopes;
        Structure::new("i", n, tmpl.signature.clone(), rels).unwrap()
    }

    fn triangle() -> Structure {
        instance(&clique(2), 3, vec![vec![0, 1], vec![1, 2], vec![2, 0]])
    }

    #[test]
    fn blp_variable_counts() {
        let t = one_in_three();
        let sys = emit_blp(&instance(&t, 3, vec![vec![0, 1, 2]]), &t).unwrap();
        assert_eq!(sys.vars.len(), 2 * 3 + 3);
        assert!(matches!(lp_feasible(&sys).unwrap(), LpOutcome::Feasible(_)));
    }

    #[test]
    fn blp_loop_constraint_feasible_at_one_third() {
        let t = one_in_three();
        let sys = emit_blp(&instance(&t, 1, vec![vec![0, 0, 0]]), &t).unwrap();
        match lp_feasible(&sys).unwrap() {
            LpOutcome::Feasible(x) => {
                // mu[0][1] = 1/3 is forced by the three marginal equations.
                let third = BigRational::new(BigInt::one(), BigInt::from(3));
                assert_eq!(x[1], third);
            }
            _ => panic!("loop constraint should be BLP-feasible"),
        }
    }

    #[test]
    fn blp_triangle_feasible_aip_triangle_infeasible() {
        let tri = triangle();
        let sys = emit_blp(&tri, &clique(2)).unwrap();
        assert!(matches!(lp_feasible(&sys).unwrap(), LpOutcome::Feasible(_)));
        let aip = emit_aip(&tri, &clique(2)).unwrap();
        assert!(matches!(ip_feasible(&aip).unwrap(), IpOutcome::Infeasible(_)));
    }

    #[test]
    fn aip_loop_constraint_infeasible() {
        let t = one_in_three();
        let sys = emit_aip(&instance(&t, 1, vec![vec![0, 0, 0]]), &t).unwrap();
        assert!(matches!(ip_feasible(&sys).unwrap(), IpOutcome::Infeasible(_)));
    }

    #[test]
    fn aip_satisfiable_instance_feasible() {
        let t = one_in_three();
        let i = instance(&t, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]);
        assert!(find_hom(&i, &t, &SearchOpts::default()).unwrap().is_some());
        let sys = emit_aip(&i, &t).unwrap();
        assert!(matches!(ip_feasible(&sys).unwrap(), IpOutcome::Feasible(_)));
    }

    #[test]
    fn tiny_hand_systems() {
        let feasible = LinearSystem {
            mode: Mode::RationalNonneg,
            vars: vec!["x".into(), "y".into()],
            eqs: vec![(vec![(1, 0), (1, 1)], 1)],
        };
        assert!(matches!(lp_feasible(&feasible).unwrap(), LpOutcome::Feasible(_)));
        let contradictory = LinearSystem {
            mode: Mode::RationalNonneg,
            vars: vec!["x".into()],
            eqs: vec![(vec![(1, 0)], 1), (vec![(1, 0)], 0)],
        };
        assert!(matches!(lp_feasible(&contradictory).unwrap(), LpOutcome::Infeasible(_)));
        let even = LinearSystem {
            mode: Mode::Integer,
            vars: vec!["x".into()],
            eqs: vec![(vec![(2, 0)], 3)],
        };
        assert!(matches!(ip_feasible(&even).unwrap(), IpOutcome::Infeasible(_)));
        let ok = LinearSystem {
            mode: Mode::Integer,
            vars: vec!["x".into(), "y".into()],
            eqs: vec![(vec![(2, 0), (3, 1)], 1)],
        };
        assert!(matches!(ip_feasible(&ok).unwrap(), IpOutcome::Feasible(_)));
    }

    #[test]
    fn serialization_shape() {
        let t = one_in_three();
        let sys = emit_blp(&instance(&t, 1, vec![vec![0, 0, 0]]), &t).unwrap();
        let text = sys.serialize();
        assert!(text.contains("1*mu[0][0] 1*mu[0][1] = 1"));
        assert!(text.contains("mu[0,0,0][r][0]"));
    }

    #[test]
    fn boolean_elimination_drops_unary_rows() {
        let t = one_in_three();
        let i = instance(&t, 3, vec![vec![0, 1, 2]]);
        let full = emit_aip(&i, &t).unwrap();
        let slim = emit_aip_opts(&i, &t, true).unwrap();
        assert!(slim.eqs.len() < full.eqs.len());
        // Feasibility must be unchanged by the rewrite.
        assert!(matches!(ip_feasible(&slim).unwrap(), IpOutcome::Feasible(_)));
        let loopy = instance(&t, 1, vec![vec![0, 0, 0]]);
        let slim_loop = emit_aip_opts(&loopy, &t, true).unwrap();
        assert!(matches!(ip_feasible(&slim_loop).unwrap(), IpOutcome::Infeasible(_)));
    }

    #[test]
    fn homomorphism_implies_both_relaxations_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sig = Signature::new(vec![("e", 2)]).unwrap();
        let mut tested = 0;
        while tested < 25 {
            let tn = rng.gen_range(2..=3);
            let mut tuples = Vec::new();
            for u in 0..tn {
                for v in 0..tn {
                    if rng.gen_bool(0.6) {
                        tuples.push(vec![u, v]);
                    }
                }
            }
            let a = Structure::new("a", tn, sig.clone(), vec![tuples]).unwrap();
            let nv = rng.gen_range(1..=4);
            let mut scopes = Vec::new();
            for _ in 0..rng.gen_range(0..=4) {
                scopes.push(vec![rng.gen_range(0..nv), rng.gen_range(0..nv)]);
            }
            let i = instance(&a, nv, scopes);
            if find_hom(&i, &a, &SearchOpts::default()).unwrap().is_none() {
                continue;
            }
            tested += 1;
            assert!(matches!(
                lp_feasible(&emit_blp(&i, &a).unwrap()).unwrap(),
                LpOutcome::Feasible(_)
            ));
            assert!(matches!(
                ip_feasible(&emit_aip(&i, &a).unwrap()).unwrap(),
                IpOutcome::Feasible(_)
            ));
        }
    }

    #[test]
    fn solve_promise_t_h2() {
        let t = PromiseTemplate::new(one_in_three(), nae(2)).unwrap();
        let sat = instance(&t.a, 3, vec![vec![0, 1, 2]]);
        let v = solve_promise(&t, &sat, Method::Aip, &SearchOpts::default(), &SizeCap::default())
            .unwrap();
        assert!(v.yes);
        assert!(v.soundness.contains("supported"));
        let loopy = instance(&t.a, 1, vec![vec![0, 0, 0]]);
        let v2 = solve_promise(&t, &loopy, Method::Aip, &SearchOpts::default(), &SizeCap::default())
            .unwrap();
        assert!(!v2.yes);
    }

    #[test]
    fn solve_promise_gac_on_horn() {
        let h = crate::core::horn();
        let t = PromiseTemplate::diagonal(h.clone());
        let mut rels: Vec<Vec<Vec<usize>>> = vec![Vec::new(); h.signature.relations.len()];
        rels[h.signature.index_of("one").unwrap()] = vec![vec![0]];
        rels[h.signature.index_of("zero").unwrap()] = vec![vec![0]];
        let i = Structure::new("i", 1, h.signature.clone(), rels).unwrap();
        let v = solve_promise(&t, &i, Method::Gac, &SearchOpts::default(), &SizeCap::default())
            .unwrap();
        assert!(!v.yes);
        assert!(v.soundness.contains("width 1"));
    }
}
