//! Homomorphism search: generalized arc consistency, backtracking with
//! propagation, lexicographic enumeration, and (k,l)-consistency.
//!
//! Domains are bitmasks (64 target elements per word). The solver keeps a
//! trail so backtracking restores domains and per-constraint alive-tuple
//! caches in O(changes).

use crate::core::Structure;
use crate::{Error, Result, SizeCap};
use itertools::Itertools;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type Homomorphism = Vec<usize>;

/// Candidate target sets per instance element, as produced by [`gac`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainTable {
    pub candidates: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct SearchOpts {
    pub node_budget: Option<u64>,
    /// Force the single-worker code path (reproducible witness).
    pub deterministic: bool,
    /// Worker count for the parallel root split; 1 disables splitting.
    pub jobs: usize,
    /// Pre-assigned values (variable, value), applied before propagation.
    pub pins: Vec<(usize, usize)>,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts { node_budget: None, deterministic: true, jobs: 1, pins: Vec::new() }
    }
}

/// Independent tuple-by-tuple verification of a claimed homomorphism.
pub fn verify_hom(inst: &Structure, tmpl: &Structure, h: &[usize]) -> bool {
    if h.len() != inst.domain_size || !inst.similar_to(tmpl) {
        return false;
    }
    if h.iter().any(|&v| v >= tmpl.domain_size) {
        return false;
    }
    for (r, tuples) in inst.relations.iter().enumerate() {
        for t in tuples {
            let image: Vec<usize> = t.iter().map(|&e| h[e]).collect();
            if !tmpl.contains(r, &image) {
                return false;
            }
        }
    }
    true
}

const NO_ALIVE_CACHE: u64 = u64::MAX;

#[derive(Clone)]
struct Constraint {
    rel: u32,
    scope: Vec<u32>,
}

/// A template tuple can support a constraint with repeated scope variables
/// only if it assigns those repeats the same value.
fn tuple_self_consistent(t: &[usize], scope: &[u32]) -> bool {
    for i in 0..scope.len() {
        for j in i + 1..scope.len() {
            if scope[i] == scope[j] && t[i] != t[j] {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy)]
enum TrailEntry {
    Dom { var: u32, word: u32, old: u64 },
    Alive { con: u32, old: u64 },
}

/// Shared immutable part of a solver instance.
struct Problem<'a> {
    tmpl: &'a Structure,
    n_vars: usize,
    wpv: usize,
    full_dom: Vec<u64>,
    constraints: Vec<Constraint>,
    var_cons: Vec<Vec<u32>>,
}

impl<'a> Problem<'a> {
    fn build(inst: &Structure, tmpl: &'a Structure) -> Result<Problem<'a>> {
        if !inst.similar_to(tmpl) {
            return Err(Error::Invalid(format!(
                "instance {} and template {} are not similar",
                inst.name, tmpl.name
            )));
        }
        let n_vars = inst.domain_size;
        let ts = tmpl.domain_size.max(1);
        let wpv = ts.div_ceil(64);
        let mut full_dom = vec![0u64; wpv];
        for v in 0..tmpl.domain_size {
            full_dom[v / 64] |= 1 << (v % 64);
        }
        let mut constraints = Vec::new();
        let mut var_cons = vec![Vec::new(); n_vars];
        for (r, tuples) in inst.relations.iter().enumerate() {
            for t in tuples {
                let ci = constraints.len() as u32;
                for &v in t.iter().unique() {
                    var_cons[v].push(ci);
                }
                constraints.push(Constraint {
                    rel: r as u32,
                    scope: t.iter().map(|&v| v as u32).collect(),
                });
            }
        }
        Ok(Problem { tmpl, n_vars, wpv, full_dom, constraints, var_cons })
    }
}

struct Solver<'a, 'p> {
    p: &'p Problem<'a>,
    doms: Vec<u64>,
    alive: Vec<u64>,
    trail: Vec<TrailEntry>,
    levels: Vec<usize>,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    /// Conflict counter per constraint; bumped on wipe-out, never undone.
    weight: Vec<u64>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'a, 'p> Solver<'a, 'p> {
    fn new(p: &'p Problem<'a>, budget: Option<u64>) -> Solver<'a, 'p> {
        let mut doms = Vec::with_capacity(p.n_vars * p.wpv);
        for _ in 0..p.n_vars {
            doms.extend_from_slice(&p.full_dom);
        }
        let alive = p
            .constraints
            .iter()
            .map(|c| {
                let tuples = &p.tmpl.relations[c.rel as usize];
                if tuples.len() <= 64 {
                    let mut mask = 0u64;
                    for (ti, t) in tuples.iter().enumerate() {
                        if tuple_self_consistent(t, &c.scope) {
                            mask |= 1 << ti;
                        }
                    }
                    mask
                } else {
                    NO_ALIVE_CACHE
                }
            })
            .collect();
        Solver {
            p,
            doms,
            alive,
            trail: Vec::new(),
            levels: Vec::new(),
            queue: VecDeque::new(),
            in_queue: vec![false; p.constraints.len()],
            weight: vec![1; p.constraints.len()],
            nodes: 0,
            budget,
        }
    }

    #[inline]
    fn dom(&self, v: usize) -> &[u64] {
        &self.doms[v * self.p.wpv..(v + 1) * self.p.wpv]
    }

    #[inline]
    fn dom_has(&self, v: usize, val: usize) -> bool {
        self.doms[v * self.p.wpv + val / 64] >> (val % 64) & 1 == 1
    }

    fn dom_size(&self, v: usize) -> u32 {
        self.dom(v).iter().map(|w| w.count_ones()).sum()
    }

    fn dom_values(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.dom(v).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    fn push_level(&mut self) {
        self.levels.push(self.trail.len());
    }

    fn pop_level(&mut self) {
        let mark = self.levels.pop().expect("unbalanced trail");
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                TrailEntry::Dom { var, word, old } => {
                    self.doms[var as usize * self.p.wpv + word as usize] = old;
                }
                TrailEntry::Alive { con, old } => {
                    self.alive[con as usize] = old;
                }
            }
        }
        self.queue.clear();
        self.in_queue.iter_mut().for_each(|b| *b = false);
    }

    /// Intersect the domain of `v` with `mask`; returns whether it shrank,
    /// enqueueing incident constraints if so.
    fn restrict(&mut self, v: usize, mask: &[u64]) -> bool {
        let mut shrank = false;
        for wi in 0..self.p.wpv {
            let idx = v * self.p.wpv + wi;
            let old = self.doms[idx];
            let new = old & mask[wi];
            if new != old {
                self.trail.push(TrailEntry::Dom { var: v as u32, word: wi as u32, old });
                self.doms[idx] = new;
                shrank = true;
            }
        }
        if shrank {
            for &c in &self.p.var_cons[v] {
                if !self.in_queue[c as usize] {
                    self.in_queue[c as usize] = true;
                    self.queue.push_back(c);
                }
            }
        }
        shrank
    }

    fn assign(&mut self, v: usize, val: usize) {
        let mut mask = vec![0u64; self.p.wpv];
        mask[val / 64] = 1 << (val % 64);
        self.restrict(v, &mask);
    }

    /// Revise one constraint: drop dead tuples, then filter each scope
    /// variable down to the supported values. Returns false on wipe-out.
    fn revise(&mut self, ci: u32) -> bool {
        let c = &self.p.constraints[ci as usize];
        let tuples = &self.p.tmpl.relations[c.rel as usize];
        let k = c.scope.len();
        let wpv = self.p.wpv;
        let mut support = vec![0u64; k * wpv];
        let cached = self.alive[ci as usize];
        let use_cache = tuples.len() <= 64;
        let mut new_alive = 0u64;
        for (ti, t) in tuples.iter().enumerate() {
            if use_cache && cached >> ti & 1 == 0 {
                continue;
            }
            if !use_cache && !tuple_self_consistent(t, &c.scope) {
                continue;
            }
            let ok = t
                .iter()
                .zip(&c.scope)
                .all(|(&val, &v)| self.dom_has(v as usize, val));
            if ok {
                if use_cache {
                    new_alive |= 1 << ti;
                }
                for (pos, (&val, _)) in t.iter().zip(&c.scope).enumerate() {
                    support[pos * wpv + val / 64] |= 1 << (val % 64);
                }
            }
        }
        if use_cache && new_alive == 0 {
            self.weight[ci as usize] += 1;
            return false;
        }
        if use_cache && new_alive != cached {
            self.trail.push(TrailEntry::Alive { con: ci, old: cached });
            self.alive[ci as usize] = new_alive;
        }
        let scope = self.p.constraints[ci as usize].scope.clone();
        for (pos, &v) in scope.iter().enumerate() {
            self.restrict(v as usize, &support[pos * wpv..(pos + 1) * wpv]);
            if self.dom(v as usize).iter().all(|&w| w == 0) {
                self.weight[ci as usize] += 1;
                return false;
            }
        }
        true
    }

    /// Propagate to fixpoint. Returns false on inconsistency.
    fn propagate(&mut self) -> bool {
        while let Some(ci) = self.queue.pop_front() {
            self.in_queue[ci as usize] = false;
            if !self.revise(ci) {
                return false;
            }
        }
        true
    }

    fn enqueue_all(&mut self) {
        for ci in 0..self.p.constraints.len() {
            if !self.in_queue[ci] {
                self.in_queue[ci] = true;
                self.queue.push_back(ci as u32);
            }
        }
    }

    /// Smallest domain, ties broken by highest accumulated conflict weight
    /// over incident constraints (dom/wdeg), then lowest index. Only
    /// variables with at least 2 candidates are returned.
    fn pick_branch_var(&self) -> Option<usize> {
        let mut best: Option<(u32, u64, usize)> = None;
        for v in 0..self.p.n_vars {
            let s = self.dom_size(v);
            if s >= 2 {
                let wdeg: u64 = self.p.var_cons[v]
                    .iter()
                    .map(|&c| self.weight[c as usize])
                    .sum();
                let key = (s, u64::MAX - wdeg, v);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, v)| v)
    }

    /// Lowest-index variable with at least 2 candidates (lex enumeration).
    fn pick_lex_var(&self) -> Option<usize> {
        (0..self.p.n_vars).find(|&v| self.dom_size(v) >= 2)
    }

    fn extract(&self) -> Homomorphism {
        (0..self.p.n_vars)
            .map(|v| {
                let vals = self.dom_values(v);
                debug_assert_eq!(vals.len(), 1);
                vals[0]
            })
            .collect()
    }

    fn charge_node(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::Budget { nodes: self.nodes });
            }
        }
        Ok(())
    }

    /// Depth-first search for one solution.
    fn solve(&mut self) -> Result<Option<Homomorphism>> {
        if !self.propagate() {
            return Ok(None);
        }
        let Some(v) = self.pick_branch_var() else {
            if (0..self.p.n_vars).any(|v| self.dom(v).iter().all(|&w| w == 0)) {
                return Ok(None);
            }
            return Ok(Some(self.extract()));
        };
        for val in self.dom_values(v) {
            self.charge_node()?;
            self.push_level();
            self.assign(v, val);
            match self.solve() {
                Ok(Some(h)) => return Ok(Some(h)),
                Ok(None) => self.pop_level(),
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    /// Enumerate solutions in lexicographic order of the assignment vector.
    fn enumerate(&mut self, cap: usize, out: &mut Vec<Homomorphism>) -> Result<bool> {
        if !self.propagate() {
            return Ok(false);
        }
        let Some(v) = self.pick_lex_var() else {
            if (0..self.p.n_vars).any(|v| self.dom(v).iter().all(|&w| w == 0)) {
                return Ok(false);
            }
            out.push(self.extract());
            return Ok(out.len() >= cap);
        };
        for val in self.dom_values(v) {
            self.charge_node()?;
            self.push_level();
            self.assign(v, val);
            let full = self.enumerate(cap, out)?;
            self.pop_level();
            if full {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Greatest fixpoint of support filtering; `None` flags inconsistency.
pub fn gac(inst: &Structure, tmpl: &Structure) -> Result<Option<DomainTable>> {
    let p = Problem::build(inst, tmpl)?;
    let mut s = Solver::new(&p, None);
    s.enqueue_all();
    if !s.propagate() {
        return Ok(None);
    }
    if (0..p.n_vars).any(|v| s.dom(v).iter().all(|&w| w == 0)) {
        return Ok(None);
    }
    Ok(Some(DomainTable {
        candidates: (0..p.n_vars).map(|v| s.dom_values(v)).collect(),
    }))
}

/// Backtracking search with GAC propagation. Returns a verified
/// homomorphism, or `None` after a complete search. A budget overrun is an
/// error, never `None`.
pub fn find_hom(
    inst: &Structure,
    tmpl: &Structure,
    opts: &SearchOpts,
) -> Result<Option<Homomorphism>> {
    find_hom_counted(inst, tmpl, opts).map(|(h, _)| h)
}

/// Like [`find_hom`] but also reports explored node count.
pub fn find_hom_counted(
    inst: &Structure,
    tmpl: &Structure,
    opts: &SearchOpts,
) -> Result<(Option<Homomorphism>, u64)> {
    let p = Problem::build(inst, tmpl)?;
    let mut s = Solver::new(&p, opts.node_budget);
    for &(v, val) in &opts.pins {
        if v >= p.n_vars || val >= tmpl.domain_size {
            return Err(Error::Invalid(format!("pin ({}, {}) out of range", v, val)));
        }
        s.assign(v, val);
    }
    s.enqueue_all();

    #[cfg(feature = "parallel")]
    if !opts.deterministic && opts.jobs > 1 {
        return find_hom_parallel(inst, &p, s, opts);
    }

    let result = s.solve()?;
    if let Some(h) = &result {
        assert!(verify_hom(inst, tmpl, h), "search returned a non-homomorphism");
    }
    Ok((result, s.nodes))
}

#[cfg(feature = "parallel")]
fn find_hom_parallel(
    inst: &Structure,
    p: &Problem<'_>,
    mut root: Solver<'_, '_>,
    opts: &SearchOpts,
) -> Result<(Option<Homomorphism>, u64)> {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

    if !root.propagate() {
        return Ok((None, root.nodes));
    }
    if (0..p.n_vars).any(|v| root.dom(v).iter().all(|&w| w == 0)) {
        return Ok((None, root.nodes));
    }
    let Some(v) = root.pick_branch_var() else {
        let h = root.extract();
        assert!(verify_hom(inst, p.tmpl, &h), "search returned a non-homomorphism");
        return Ok((Some(h), root.nodes));
    };
    let nodes = AtomicU64::new(root.nodes);
    let stop = AtomicBool::new(false);
    let doms = root.doms.clone();
    let alive = root.alive.clone();
    let vals = root.dom_values(v);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {}", e)))?;
    let results: Vec<Result<Option<Homomorphism>>> = pool.install(|| {
        vals.par_iter()
            .map(|&val| {
                if stop.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                let mut s = Solver::new(p, None);
                s.doms.copy_from_slice(&doms);
                s.alive.copy_from_slice(&alive);
                // Split the shared budget by polling a global counter.
                s.budget = None;
                s.assign(v, val);
                let out = solve_shared(&mut s, &nodes, opts.node_budget, &stop);
                if let Ok(Some(_)) = &out {
                    stop.store(true, Ordering::Relaxed);
                }
                out
            })
            .collect()
    });
    let total = nodes.load(Ordering::Relaxed);
    let mut budget_hit = None;
    for r in results {
        match r {
            Ok(Some(h)) => {
                assert!(verify_hom(inst, p.tmpl, &h), "search returned a non-homomorphism");
                return Ok((Some(h), total));
            }
            Ok(None) => {}
            Err(e) => budget_hit = Some(e),
        }
    }
    if let Some(e) = budget_hit {
        return Err(e);
    }
    Ok((None, total))
}

#[cfg(feature = "parallel")]
fn solve_shared(
    s: &mut Solver<'_, '_>,
    nodes: &std::sync::atomic::AtomicU64,
    budget: Option<u64>,
    stop: &std::sync::atomic::AtomicBool,
) -> Result<Option<Homomorphism>> {
    use std::sync::atomic::Ordering;
    if !s.propagate() {
        return Ok(None);
    }
    let Some(v) = s.pick_branch_var() else {
        if (0..s.p.n_vars).any(|v| s.dom(v).iter().all(|&w| w == 0)) {
            return Ok(None);
        }
        return Ok(Some(s.extract()));
    };
    for val in s.dom_values(v) {
        if stop.load(Ordering::Relaxed) {
            return Ok(None);
        }
        let n = nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(b) = budget {
            if n > b {
                return Err(Error::Budget { nodes: n });
            }
        }
        s.push_level();
        s.assign(v, val);
        match solve_shared(s, nodes, budget, stop) {
            Ok(Some(h)) => return Ok(Some(h)),
            Ok(None) => s.pop_level(),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// All homomorphisms in lexicographic order, truncated at `cap` (the flag
/// reports truncation).
pub fn enumerate_homs(
    inst: &Structure,
    tmpl: &Structure,
    cap: usize,
) -> Result<(Vec<Homomorphism>, bool)> {
    let p = Problem::build(inst, tmpl)?;
    let mut s = Solver::new(&p, None);
    s.enqueue_all();
    let mut out = Vec::new();
    let truncated = s.enumerate(cap, &mut out)?;
    debug_assert!(out.iter().all(|h| verify_hom(inst, tmpl, h)));
    Ok((out, truncated))
}

/// Family of partial homomorphisms with domains of size <= l, closed under
/// restriction and k-to-l extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialHomFamily {
    /// Sorted domain subset -> set of value rows (aligned with the subset).
    pub maps: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>>,
}

impl PartialHomFamily {
    pub fn is_empty(&self) -> bool {
        self.maps.values().all(|set| set.is_empty())
    }
}

fn is_partial_hom(
    inst: &Structure,
    tmpl: &Structure,
    dom: &[usize],
    vals: &[usize],
) -> bool {
    for (r, tuples) in inst.relations.iter().enumerate() {
        for t in tuples {
            let image: Option<Vec<usize>> = t
                .iter()
                .map(|e| dom.iter().position(|d| d == e).map(|i| vals[i]))
                .collect();
            if let Some(image) = image {
                if !tmpl.contains(r, &image) {
                    return false;
                }
            }
        }
    }
    true
}

/// The largest family of partial homomorphisms per the (k,l)-consistency
/// algorithm; an empty family means the instance is not (k,l)-consistent.
pub fn kl_consistency(
    inst: &Structure,
    tmpl: &Structure,
    k: usize,
    l: usize,
    cap: &SizeCap,
) -> Result<PartialHomFamily> {
    if k < 1 || k > l {
        return Err(Error::Invalid(format!("need 1 <= k <= l, got k={}, l={}", k, l)));
    }
    if !inst.similar_to(tmpl) {
        return Err(Error::Invalid("instance and template not similar".into()));
    }
    let n = inst.domain_size;
    let lmax = l.min(n);
    let mut subsets: u128 = 0;
    for size in 0..=lmax {
        let c = (0..n).combinations(size).count() as u128;
        subsets += c * (tmpl.domain_size as u128).pow(size as u32);
    }
    cap.check_tuples("kl_consistency family", subsets)?;

    let mut maps: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for size in 0..=lmax {
        for dom in (0..n).combinations(size) {
            let mut set = BTreeSet::new();
            let mut vals = vec![0usize; size];
            loop {
                if is_partial_hom(inst, tmpl, &dom, &vals) {
                    set.insert(vals.clone());
                }
                // Advance mixed-radix counter over the target domain.
                let mut j = size;
                loop {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                    vals[j] += 1;
                    if vals[j] < tmpl.domain_size {
                        break;
                    }
                    vals[j] = 0;
                }
                if vals.iter().all(|&x| x == 0) {
                    break;
                }
                if size == 0 {
                    break;
                }
            }
            if size == 0 && tmpl.domain_size > 0 {
                set.insert(Vec::new());
            }
            maps.insert(dom, set);
        }
    }

    // Fixpoint removal.
    loop {
        let mut removed = false;
        let doms: Vec<Vec<usize>> = maps.keys().cloned().collect();
        for dom in &doms {
            let rows: Vec<Vec<usize>> = maps[dom].iter().cloned().collect();
            for row in rows {
                let mut keep = true;
                // Restriction closure (co-atoms suffice at the fixpoint).
                for drop in 0..dom.len() {
                    let sub_dom: Vec<usize> =
                        dom.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &x)| x).collect();
                    let sub_row: Vec<usize> =
                        row.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &x)| x).collect();
                    if !maps[&sub_dom].contains(&sub_row) {
                        keep = false;
                        break;
                    }
                }
                // k-to-l extension.
                if keep && dom.len() <= k {
                    let others: Vec<usize> =
                        (0..n).filter(|x| !dom.contains(x)).collect();
                    let need = lmax.saturating_sub(dom.len());
                    'ext: for extra in others.into_iter().combinations(need) {
                        let mut sup: Vec<(usize, Option<usize>)> =
                            dom.iter().zip(&row).map(|(&d, &v)| (d, Some(v))).collect();
                        sup.extend(extra.iter().map(|&x| (x, None)));
                        sup.sort_by_key(|&(d, _)| d);
                        let sup_dom: Vec<usize> = sup.iter().map(|&(d, _)| d).collect();
                        let found = maps[&sup_dom].iter().any(|g| {
                            sup.iter().zip(g).all(|(&(_, want), &got)| {
                                want.map_or(true, |w| w == got)
                            })
                        });
                        if !found {
                            keep = false;
                            break 'ext;
                        }
                    }
                }
                if !keep {
                    maps.get_mut(dom).unwrap().remove(&row);
                    removed = true;
                }
            }
        }
        if !removed {
            break;
        }
    }
    if maps.values().any(|s| s.is_empty()) {
        // One emptied level empties everything by the two closure rules.
        for set in maps.values_mut() {
            set.clear();
        }
    }
    Ok(PartialHomFamily { maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{clique, cycle, horn, nae, one_in_three, power, Signature, Structure};

    fn opts() -> SearchOpts {
        SearchOpts::default()
    }

    #[test]
    fn gac_one_in_three_loop_inconsistent() {
        // Single constraint r(v,v,v) over T: no tuple is constant.
        let inst = Structure::new(
            "loop3",
            1,
            Signature::new(vec![("r", 3)]).unwrap(),
            vec![vec![vec![0, 0, 0]]],
        )
        .unwrap();
        assert_eq!(gac(&inst, &one_in_three()).unwrap(), None);
    }

    #[test]
    fn gac_c5_k2_consistent_but_unsat() {
        let table = gac(&cycle(5), &clique(2)).unwrap().unwrap();
        assert!(table.candidates.iter().all(|c| c == &vec![0, 1]));
        assert_eq!(find_hom(&cycle(5), &clique(2), &opts()).unwrap(), None);
    }

    #[test]
    fn gac_identity_full() {
        let k3 = clique(3);
        let table = gac(&k3, &k3).unwrap().unwrap();
        assert!(table.candidates.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn find_hom_basics() {
        let h = find_hom(&clique(3), &clique(3), &opts()).unwrap().unwrap();
        assert!(verify_hom(&clique(3), &clique(3), &h));
        let h = find_hom(&cycle(5), &clique(3), &opts()).unwrap().unwrap();
        assert!(verify_hom(&cycle(5), &clique(3), &h));
        assert_eq!(find_hom(&clique(4), &clique(3), &opts()).unwrap(), None);
    }

    #[test]
    fn find_hom_budget_error() {
        let tight = SearchOpts { node_budget: Some(1), ..opts() };
        match find_hom(&clique(6), &clique(5), &tight) {
            Err(crate::Error::Budget { .. }) => {}
            other => panic!("expected budget error, got {:?}", other),
        }
    }

    #[test]
    fn find_hom_pins() {
        let pinned = SearchOpts { pins: vec![(0, 2)], ..opts() };
        let h = find_hom(&clique(3), &clique(3), &pinned).unwrap().unwrap();
        assert_eq!(h[0], 2);
    }

    #[test]
    fn enumerate_k2_k2() {
        let (homs, trunc) = enumerate_homs(&clique(2), &clique(2), 100).unwrap();
        assert_eq!(homs, vec![vec![0, 1], vec![1, 0]]);
        assert!(!trunc);
    }

    #[test]
    fn enumerate_free_vertex() {
        let inst = Structure::new(
            "pt",
            1,
            Signature::new(vec![("edge", 2)]).unwrap(),
            vec![vec![]],
        )
        .unwrap();
        let (homs, _) = enumerate_homs(&inst, &clique(3), 100).unwrap();
        assert_eq!(homs, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn enumerate_empty_and_truncation() {
        let (homs, trunc) = enumerate_homs(&clique(3), &clique(2), 100).unwrap();
        assert!(homs.is_empty());
        assert!(!trunc);
        let (homs, trunc) = enumerate_homs(&cycle(5), &clique(3), 3).unwrap();
        assert_eq!(homs.len(), 3);
        assert!(trunc);
    }

    #[test]
    fn enumeration_matches_brute_force_small() {
        // Completeness oracle: all maps checked directly.
        let cases = vec![
            (cycle(4), clique(2)),
            (cycle(5), clique(3)),
            (clique(3), clique(3)),
            (power(&clique(2), 2, &SizeCap::default()).unwrap(), clique(2)),
        ];
        for (inst, tmpl) in cases {
            let (homs, _) = enumerate_homs(&inst, &tmpl, 1_000_000).unwrap();
            let mut brute = Vec::new();
            let total = tmpl.domain_size.pow(inst.domain_size as u32);
            for code in 0..total {
                let h = crate::core::decode_tuple(code, tmpl.domain_size, inst.domain_size);
                if verify_hom(&inst, &tmpl, &h) {
                    brute.push(h);
                }
            }
            brute.sort();
            assert_eq!(homs, brute, "{} -> {}", inst.name, tmpl.name);
        }
    }

    #[test]
    fn kl_k4_k3() {
        // Pairs extend to any triangle and triangles are exempt from the
        // extension rule, so (2,3) does not refute K_4 -> K_3 ...
        let fam = kl_consistency(&clique(4), &clique(3), 2, 3, &SizeCap::default()).unwrap();
        assert!(!fam.is_empty());
        // ... but (3,4) does: no triangle colouring extends to the 4th vertex.
        let fam = kl_consistency(&clique(4), &clique(3), 3, 4, &SizeCap::default()).unwrap();
        assert!(fam.is_empty());
    }

    #[test]
    fn kl_c5_k2_nonempty() {
        let fam = kl_consistency(&cycle(5), &clique(2), 1, 2, &SizeCap::default()).unwrap();
        assert!(!fam.is_empty());
    }

    #[test]
    fn kl_identity_nonempty() {
        let k3 = clique(3);
        let fam = kl_consistency(&k3, &k3, 2, 3, &SizeCap::default()).unwrap();
        assert!(!fam.is_empty());
    }

    #[test]
    fn horn_template_sanity() {
        // Every built-in promise template side maps into itself.
        for s in [clique(3), cycle(5), nae(2), one_in_three(), horn()] {
            assert!(find_hom(&s, &s, &opts()).unwrap().is_some(), "{}", s.name);
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_agrees_with_sequential() {
        let par = SearchOpts { deterministic: false, jobs: 2, ..opts() };
        assert!(find_hom(&cycle(5), &clique(3), &par).unwrap().is_some());
        assert_eq!(find_hom(&clique(4), &clique(3), &par).unwrap(), None);
        assert_eq!(find_hom(&cycle(5), &clique(2), &par).unwrap(), None);
    }
}
