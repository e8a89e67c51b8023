//! Free structures generated by a minion, the power / LP / IP
//! specializations, the width-1 test, and minion-homomorphism existence.

use crate::core::{PromiseTemplate, Structure};
use crate::homsearch::{find_hom, SearchOpts};
use crate::minionlab::{enumerate_polymorphisms, minor_of, projection, FunctionTable};
use crate::{Error, Result, SizeCap};
use num::rational::Ratio;
use num::Zero;

/// A structure whose elements are indexed function tables.
#[derive(Debug, Clone)]
pub struct FreeStructure {
    pub structure: Structure,
    pub tables: Vec<FunctionTable>,
}

/// Where the minion's members of each arity come from.
#[derive(Debug, Clone, Copy)]
pub enum MinionSource<'a> {
    /// Pol(A,B), enumerated on demand.
    Template(&'a PromiseTemplate),
    /// The projections over a domain of the given size.
    Projections(usize),
    /// An explicit member list (must be closed under the minors taken).
    Tables(&'a [FunctionTable]),
}

impl MinionSource<'_> {
    fn members(&self, arity: usize, cap: &SizeCap) -> Result<Vec<FunctionTable>> {
        match self {
            MinionSource::Template(t) => {
                let limit = usize::try_from(cap.max_elements).unwrap_or(usize::MAX);
                let (tables, truncated) = enumerate_polymorphisms(t, arity, limit, cap)?;
                if truncated {
                    return Err(Error::SizeCap {
                        what: format!("Pol^({}) enumeration", arity),
                        needed: 0,
                        cap: cap.max_elements as u128,
                    });
                }
                Ok(tables)
            }
            MinionSource::Projections(d) => {
                Ok((0..arity).map(|i| projection(*d, arity, i)).collect())
            }
            MinionSource::Tables(list) => {
                let mut out: Vec<FunctionTable> =
                    list.iter().filter(|f| f.arity == arity).cloned().collect();
                out.sort_by(|a, b| a.values.cmp(&b.values));
                out.dedup_by(|a, b| a.values == b.values);
                Ok(out)
            }
        }
    }
}

/// F_M(a): universe = M^(|a|); each relation is the set of minor tuples
/// (g . pi_1, .., g . pi_k) over g in M^(m), with pi_i read off a's tuple
/// list column-wise.
pub fn free_structure(m: MinionSource<'_>, a: &Structure, cap: &SizeCap) -> Result<FreeStructure> {
    let n = a.domain_size;
    if n == 0 {
        return Err(Error::Invalid("generator has empty domain".into()));
    }
    let mut universe = m.members(n, cap)?;
    universe.sort_by(|x, y| x.values.cmp(&y.values));
    universe.dedup_by(|x, y| x.values == y.values);
    cap.check_elements("free structure universe", universe.len() as u128)?;
    let index_of = |values: &Vec<usize>| universe.binary_search_by(|t| t.values.cmp(values));

    let mut relations = Vec::new();
    for (r, tuples) in a.relations.iter().enumerate() {
        let k = a.signature.arity(r);
        let m_ar = tuples.len();
        let mut out = Vec::new();
        if m_ar > 0 {
            for g in m.members(m_ar, cap)? {
                let mut row = Vec::with_capacity(k);
                for i in 0..k {
                    let pi: Vec<usize> = tuples.iter().map(|t| t[i]).collect();
                    let f = minor_of(&g, &pi, n)?;
                    match index_of(&f.values) {
                        Ok(idx) => row.push(idx),
                        Err(_) => {
                            return Err(Error::Invalid(format!(
                                "minor of {} falls outside the given member list",
                                g.name
                            )))
                        }
                    }
                }
                out.push(row);
            }
        }
        relations.push(out);
    }
    let structure = Structure::new(
        format!("F_{}", a.name),
        universe.len(),
        a.signature.clone(),
        relations,
    )?;
    Ok(FreeStructure { structure, tables: universe })
}

/// Universe = nonempty subsets of A (as bitmasks, ascending); a tuple of
/// subsets is related iff some nonempty subset J of the relation's tuples
/// projects onto it coordinate-wise.
pub fn power_structure(a: &Structure, cap: &SizeCap) -> Result<Structure> {
    let n = a.domain_size;
    if n >= 64 {
        return Err(Error::Invalid("power structure needs |A| < 64".into()));
    }
    cap.check_elements("power structure universe", (1u128 << n) - 1)?;
    let mask_index = |mask: u64| (mask - 1) as usize;
    let mut relations = Vec::new();
    for (r, tuples) in a.relations.iter().enumerate() {
        let k = a.signature.arity(r);
        let m = tuples.len();
        if m >= 32 {
            return Err(Error::SizeCap {
                what: format!("power structure subsets of {}", a.signature.relations[r].name),
                needed: 1u128 << m,
                cap: cap.max_tuples as u128,
            });
        }
        let mut out = Vec::new();
        for j in 1u64..(1 << m) {
            let mut masks = vec![0u64; k];
            for (t, tuple) in tuples.iter().enumerate() {
                if j >> t & 1 == 1 {
                    for i in 0..k {
                        masks[i] |= 1 << tuple[i];
                    }
                }
            }
            out.push(masks.into_iter().map(mask_index).collect());
        }
        relations.push(out);
    }
    Structure::new(format!("P_{}", a.name), (1 << n) - 1, a.signature.clone(), relations)
}

/// Width-1 test: (A,B) has width 1 iff the power structure of A maps to B.
pub fn width1_check(
    t: &PromiseTemplate,
    cap: &SizeCap,
    opts: &SearchOpts,
) -> Result<(bool, Option<Vec<usize>>)> {
    let p = power_structure(&t.a, cap)?;
    match find_hom(&p, &t.b, opts)? {
        Some(h) => Ok((true, Some(h))),
        None => Ok((false, None)),
    }
}

/// A rational (LP) or integer (IP) weighting of A's elements; `denom` is 1
/// in integer mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub numer: Vec<i64>,
    pub denom: i64,
}

impl WeightVector {
    pub fn value(&self, a: usize) -> Ratio<i64> {
        Ratio::new(self.numer[a], self.denom)
    }
}

fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    // Weak compositions of `total`, lexicographic.
    fn rec(total: i64, parts: usize, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            acc.push(total);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for v in 0..=total {
            acc.push(v);
            rec(total - v, parts - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

fn signed_vectors(sum: i64, abs_bound: i64, parts: usize) -> Vec<Vec<i64>> {
    // Integer vectors with the given coordinate sum and 1-norm bound,
    // lexicographic.
    fn rec(sum: i64, slack: i64, parts: usize, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            if sum.abs() <= slack {
                acc.push(sum);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for v in -slack..=slack {
            acc.push(v);
            rec(sum - v, slack - v.abs(), parts - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(sum, abs_bound, parts, &mut Vec::new(), &mut out);
    }
    out
}

fn marginals_match(phi: &[&WeightVector], gamma: &[i64], tuples: &[Vec<usize>]) -> bool {
    // gamma shares phi's denominator; compare numerators directly.
    for (i, p) in phi.iter().enumerate() {
        let mut sums = vec![0i64; p.numer.len()];
        for (j, t) in tuples.iter().enumerate() {
            sums[t[i]] += gamma[j];
        }
        if sums != p.numer {
            return false;
        }
    }
    true
}

fn weighted_structure(
    a: &Structure,
    name: String,
    universe: Vec<WeightVector>,
    gammas_for: impl Fn(usize) -> Vec<Vec<i64>>,
) -> Result<(Structure, Vec<WeightVector>)> {
    let mut relations = Vec::new();
    for (r, tuples) in a.relations.iter().enumerate() {
        let k = a.signature.arity(r);
        let mut out = Vec::new();
        if !tuples.is_empty() {
            let gammas = gammas_for(tuples.len());
            // Every k-tuple of universe members admitted by some witness.
            let idxs: Vec<usize> = (0..universe.len()).collect();
            fn product(
                idxs: &[usize],
                k: usize,
                row: &mut Vec<usize>,
                accept: &mut impl FnMut(&[usize]),
            ) {
                if row.len() == k {
                    accept(row);
                    return;
                }
                for &i in idxs {
                    row.push(i);
                    product(idxs, k, row, accept);
                    row.pop();
                }
            }
            let mut row = Vec::new();
            product(&idxs, k, &mut row, &mut |row: &[usize]| {
                let phi: Vec<&WeightVector> = row.iter().map(|&i| &universe[i]).collect();
                if gammas.iter().any(|g| marginals_match(&phi, g, tuples)) {
                    out.push(row.to_vec());
                }
            });
        }
        relations.push(out);
    }
    let s = Structure::new(name, universe.len(), a.signature.clone(), relations)?;
    Ok((s, universe))
}

/// LP_l: probability distributions on A with denominators dividing l;
/// tuples related iff a distribution on the relation's tuples (same
/// denominator) has them as marginals.
pub fn lp_structure(a: &Structure, l: i64, cap: &SizeCap) -> Result<(Structure, Vec<WeightVector>)> {
    if l < 1 {
        return Err(Error::Invalid("lp_structure needs l >= 1".into()));
    }
    let universe: Vec<WeightVector> = compositions(l, a.domain_size)
        .into_iter()
        .map(|numer| WeightVector { numer, denom: l })
        .collect();
    cap.check_elements("LP universe", universe.len() as u128)?;
    weighted_structure(a, format!("LP{}_{}", l, a.name), universe, |m| compositions(l, m))
}

/// IP_l: integer vectors summing to 1 with 1-norm at most 2l+1; witnesses
/// are integer vectors on the tuple list under the same constraints.
pub fn ip_structure(a: &Structure, l: i64, cap: &SizeCap) -> Result<(Structure, Vec<WeightVector>)> {
    if l < 0 {
        return Err(Error::Invalid("ip_structure needs l >= 0".into()));
    }
    let bound = 2 * l + 1;
    let universe: Vec<WeightVector> = signed_vectors(1, bound, a.domain_size)
        .into_iter()
        .map(|numer| WeightVector { numer, denom: 1 })
        .collect();
    cap.check_elements("IP universe", universe.len() as u128)?;
    weighted_structure(a, format!("IP{}_{}", l, a.name), universe, |m| {
        signed_vectors(1, bound, m)
    })
}

/// Pol(source) maps to Pol(target) as minions iff the free structure of
/// Pol(source) generated by target.a maps homomorphically to target.b.
pub fn minion_hom_exists(
    source: &PromiseTemplate,
    target: &PromiseTemplate,
    cap: &SizeCap,
    opts: &SearchOpts,
) -> Result<(bool, Option<Vec<usize>>)> {
    let f = free_structure(MinionSource::Template(source), &target.a, cap)?;
    match find_hom(&f.structure, &target.b, opts)? {
        Some(h) => Ok((true, Some(h))),
        None => Ok((false, None)),
    }
}

/// Sanity helper for tests: exact rational row sums of a weight vector.
pub fn weight_sum(w: &WeightVector) -> Ratio<i64> {
    w.numer
        .iter()
        .fold(Ratio::zero(), |acc, &v| acc + Ratio::new(v, w.denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{clique, horn, nae, one_in_three, serialize_structure};
    use crate::homsearch::verify_hom;

    fn cap() -> SizeCap {
        SizeCap::default()
    }

    #[test]
    fn free_of_projections_is_identity() {
        for a in [clique(2), clique(3), crate::core::cycle(5), one_in_three(), nae(2), horn()] {
            let f = free_structure(MinionSource::Projections(2), &a, &cap()).unwrap();
            assert_eq!(f.structure.domain_size, a.domain_size, "{}", a.name);
            // Projection tables sort by values as p_1 < p_2 < ..; the minor
            // tuples then read off the original tuple list exactly.
            assert_eq!(f.structure.relations, a.relations, "{}", a.name);
        }
    }

    #[test]
    fn free_of_pol_k2_by_k2() {
        let t = PromiseTemplate::diagonal(clique(2));
        let f = free_structure(MinionSource::Template(&t), &clique(2), &cap()).unwrap();
        assert_eq!(f.structure.domain_size, 4);
        // Universe sorted by values: 0011 (x), 0101 (y), 1010 (not y),
        // 1100 (not x); edges pair x-y and not-x - not-y.
        assert_eq!(f.tables[0].values, vec![0, 0, 1, 1]);
        assert_eq!(
            f.structure.relations[0],
            vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]]
        );
    }

    #[test]
    fn free_of_horn_minion_is_power_structure() {
        let m = PromiseTemplate::diagonal(horn());
        for a in [clique(2), one_in_three(), clique(3)] {
            let f = free_structure(MinionSource::Template(&m), &a, &cap()).unwrap();
            let p = power_structure(&a, &cap()).unwrap();
            assert_eq!(f.structure.domain_size, p.domain_size, "{}", a.name);
            // Universe order differs (tables vs bitmasks); compare up to the
            // min-set correspondence: table index -> set of coordinates that
            // appear in some true assignment... simplest check: canonical
            // serialization after relabelling via the sets of essential
            // coordinates match. Horn polymorphisms are the coordinate
            // conjunctions, whose table is determined by its support set.
            let relabel: Vec<usize> = f
                .tables
                .iter()
                .map(|t| {
                    // Conjunction support: coordinates that must be "large".
                    let mask: u64 = crate::minionlab::essential_coordinates(t)
                        .iter()
                        .fold(0, |m, &c| m | 1 << c);
                    (mask - 1) as usize
                })
                .collect();
            let mut mapped: Vec<Vec<Vec<usize>>> = f
                .structure
                .relations
                .iter()
                .map(|rel| {
                    rel.iter()
                        .map(|t| t.iter().map(|&v| relabel[v]).collect())
                        .collect()
                })
                .collect();
            for rel in &mut mapped {
                rel.sort();
                rel.dedup();
            }
            assert_eq!(mapped, p.relations, "{}", a.name);
        }
    }

    #[test]
    fn power_structure_k2() {
        let p = power_structure(&clique(2), &cap()).unwrap();
        assert_eq!(p.domain_size, 3);
        // {0}=0, {1}=1, {0,1}=2: edges both ways plus a loop on {0,1}.
        assert!(p.contains(0, &[0, 1]));
        assert!(p.contains(0, &[1, 0]));
        assert!(p.contains(0, &[2, 2]));
        assert!(!p.contains(0, &[0, 0]));
        assert_eq!(p.relations[0].len(), 3);
    }

    #[test]
    fn power_structure_empty_relation() {
        let a = Structure::new(
            "a",
            2,
            crate::core::Signature::new(vec![("e", 2)]).unwrap(),
            vec![Vec::new()],
        )
        .unwrap();
        let p = power_structure(&a, &cap()).unwrap();
        assert!(p.relations[0].is_empty());
    }

    #[test]
    fn width1_results() {
        let opts = SearchOpts::default();
        let (yes, h) = width1_check(&PromiseTemplate::diagonal(horn()), &cap(), &opts).unwrap();
        assert!(yes);
        let p = power_structure(&horn(), &cap()).unwrap();
        assert!(verify_hom(&p, &horn(), &h.unwrap()));
        let (no, _) = width1_check(&PromiseTemplate::diagonal(clique(2)), &cap(), &opts).unwrap();
        assert!(!no);
    }

    #[test]
    fn lp_universe_examples() {
        let (s, u) = lp_structure(&clique(2), 2, &cap()).unwrap();
        assert_eq!(s.domain_size, 3);
        let numers: Vec<&Vec<i64>> = u.iter().map(|w| &w.numer).collect();
        assert_eq!(numers, vec![&vec![0, 2], &vec![1, 1], &vec![2, 0]]);
        assert!(u.iter().all(|w| weight_sum(w) == Ratio::from_integer(1)));
        // l = 1 reproduces A itself (point distributions).
        let (s1, _) = lp_structure(&clique(3), 1, &cap()).unwrap();
        assert_eq!(s1.domain_size, 3);
        let mut rel = s1.relations[0].clone();
        // Point distribution (0..,1,..0) with the 1 at position a sorts to
        // index |A|-1-a; undo that relabelling.
        for t in &mut rel {
            for v in t.iter_mut() {
                *v = 2 - *v;
            }
        }
        rel.sort();
        assert_eq!(rel, clique(3).relations[0]);
    }

    #[test]
    fn ip_universe_example() {
        let (_, u) = ip_structure(&one_in_three(), 1, &cap()).unwrap();
        let numers: Vec<&Vec<i64>> = u.iter().map(|w| &w.numer).collect();
        assert_eq!(numers, vec![&vec![-1, 2], &vec![0, 1], &vec![1, 0], &vec![2, -1]]);
    }

    #[test]
    fn minion_hom_identity() {
        let t = PromiseTemplate::diagonal(clique(2));
        let (yes, _) = minion_hom_exists(&t, &t, &cap(), &SearchOpts::default()).unwrap();
        assert!(yes);
    }

    #[test]
    fn sigma_of_free_structure_is_satisfied() {
        // Pol(K_2) satisfies Sigma(K_2, F_M(K_2)).
        let t = PromiseTemplate::diagonal(clique(2));
        let f = free_structure(MinionSource::Template(&t), &clique(2), &cap()).unwrap();
        let c = crate::indicator::instance_to_condition(&clique(2), &f.structure).unwrap();
        let out = crate::indicator::check_condition_in_pol(
            &c,
            &t,
            &SearchOpts::default(),
            &cap(),
        )
        .unwrap();
        assert!(out.is_sat());
    }

    #[test]
    fn symmetric_witness_gives_lp_homomorphism() {
        // s_3 in Pol(K_2) symmetric -> h(phi) = s_3(multiset of phi) is a
        // homomorphism LP_3(K_2) -> K_2.
        let t = PromiseTemplate::diagonal(clique(2));
        let c = crate::conditions::generate_condition(crate::conditions::ConditionKind::Symmetric(
            3,
        ))
        .unwrap();
        let out = crate::indicator::check_condition_in_pol(&c, &t, &SearchOpts::default(), &cap())
            .unwrap();
        let w = match out {
            crate::indicator::CheckOutcome::Witness(w) => w,
            _ => panic!("symmetric(3) should be satisfied in Pol(K_2)"),
        };
        let s3 = &w.assignment["f"];
        let (lp, universe) = lp_structure(&clique(2), 3, &cap()).unwrap();
        let h: Vec<usize> = universe
            .iter()
            .map(|phi| {
                let mut args = Vec::new();
                for (a, &cnt) in phi.numer.iter().enumerate() {
                    args.extend(std::iter::repeat(a).take(cnt as usize));
                }
                s3.eval(&args)
            })
            .collect();
        assert!(verify_hom(&lp, &clique(2), &h));
    }

    #[test]
    fn alternating_witness_gives_ip_homomorphism() {
        // The dual statement for alternating(3) over (T, H_2) and IP_1(T).
        let t = PromiseTemplate::new(one_in_three(), nae(2)).unwrap();
        let c = crate::conditions::generate_condition(
            crate::conditions::ConditionKind::Alternating(3),
        )
        .unwrap();
        let out = crate::indicator::check_condition_in_pol(&c, &t, &SearchOpts::default(), &cap())
            .unwrap();
        let w = match out {
            crate::indicator::CheckOutcome::Witness(w) => w,
            _ => panic!("alternating(3) should be satisfied in Pol(T,H_2)"),
        };
        let a3 = &w.assignment["a"];
        let (ip, universe) = ip_structure(&one_in_three(), 1, &cap()).unwrap();
        let h: Vec<usize> = universe
            .iter()
            .map(|phi| {
                let mut pos = Vec::new();
                let mut neg = Vec::new();
                for (a, &v) in phi.numer.iter().enumerate() {
                    if v > 0 {
                        pos.extend(std::iter::repeat(a).take(v as usize));
                    } else {
                        neg.extend(std::iter::repeat(a).take((-v) as usize));
                    }
                }
                // Interleave p n p n ..; pad trailing slots with equal
                // pairs (the cancellation identity makes the pad value
                // irrelevant).
                let mut args = Vec::with_capacity(3);
                let mut ni = neg.into_iter();
                for p in pos {
                    args.push(p);
                    if let Some(nv) = ni.next() {
                        args.push(nv);
                    }
                }
                while args.len() < 3 {
                    args.push(0);
                    args.push(0);
                }
                a3.eval(&args)
            })
            .collect();
        assert!(verify_hom(&ip, &nae(2), &h), "{}", serialize_structure(&ip));
    }
}
