//! Finite relational structures: signatures, powers, quotients, disjoint
//! unions, built-in templates, and the line-oriented text format.
//!
//! Elements are `0..domain_size`. Relation tuple lists are canonical:
//! lexicographically sorted and deduplicated, so tuple indices are stable
//! across runs and the indicator constructions are byte-reproducible.

use crate::{Error, Result, SizeCap};
use std::fmt::Write as _;

pub type Tuple = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDecl {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub relations: Vec<RelationDecl>,
}

impl Signature {
    pub fn new(relations: Vec<(impl Into<String>, usize)>) -> Result<Signature> {
        let relations: Vec<RelationDecl> = relations
            .into_iter()
            .map(|(name, arity)| RelationDecl { name: name.into(), arity })
            .collect();
        let sig = Signature { relations };
        sig.validate()?;
        Ok(sig)
    }

    fn validate(&self) -> Result<()> {
        for (i, r) in self.relations.iter().enumerate() {
            if r.arity == 0 {
                return Err(Error::Invalid(format!("relation {} has arity 0", r.name)));
            }
            if self.relations[..i].iter().any(|s| s.name == r.name) {
                return Err(Error::Invalid(format!("duplicate relation name {}", r.name)));
            }
        }
        Ok(())
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub name: String,
    pub domain_size: usize,
    pub signature: Signature,
    /// One canonical tuple list per relation declaration.
    pub relations: Vec<Vec<Tuple>>,
}

impl Structure {
    pub fn new(
        name: impl Into<String>,
        domain_size: usize,
        signature: Signature,
        relations: Vec<Vec<Tuple>>,
    ) -> Result<Structure> {
        let name = name.into();
        if relations.len() != signature.relations.len() {
            return Err(Error::Invalid(format!(
                "structure {}: {} tuple lists for {} relations",
                name,
                relations.len(),
                signature.relations.len()
            )));
        }
        let mut canonical = Vec::with_capacity(relations.len());
        for (decl, mut tuples) in signature.relations.iter().zip(relations) {
            for t in &tuples {
                if t.len() != decl.arity {
                    return Err(Error::Invalid(format!(
                        "structure {}: tuple {:?} has length {} but {} has arity {}",
                        name,
                        t,
                        t.len(),
                        decl.name,
                        decl.arity
                    )));
                }
                if let Some(&e) = t.iter().find(|&&e| e >= domain_size) {
                    return Err(Error::Invalid(format!(
                        "structure {}: element {} out of range (domain {})",
                        name, e, domain_size
                    )));
                }
            }
            tuples.sort();
            tuples.dedup();
            canonical.push(tuples);
        }
        Ok(Structure { name, domain_size, signature, relations: canonical })
    }

    pub fn similar_to(&self, other: &Structure) -> bool {
        self.signature.relations.len() == other.signature.relations.len()
            && self
                .signature
                .relations
                .iter()
                .zip(&other.signature.relations)
                .all(|(a, b)| a.arity == b.arity)
    }

    pub fn total_tuples(&self) -> usize {
        self.relations.iter().map(|r| r.len()).sum()
    }

    /// Binary search in the canonical list; usable as membership test.
    pub fn contains(&self, rel: usize, tuple: &[usize]) -> bool {
        self.relations[rel].binary_search_by(|t| t.as_slice().cmp(tuple)).is_ok()
    }

    pub fn tuple_index(&self, rel: usize, tuple: &[usize]) -> Option<usize> {
        self.relations[rel].binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }
}

/// A promise template (A, B): two similar structures.
///
/// The sanity condition A -> B is not checked here (it needs search); use
/// `homsearch::find_hom(&t.a, &t.b, ..)` to verify it.
#[derive(Debug, Clone)]
pub struct PromiseTemplate {
    pub a: Structure,
    pub b: Structure,
}

impl PromiseTemplate {
    pub fn new(a: Structure, b: Structure) -> Result<PromiseTemplate> {
        if !a.similar_to(&b) {
            return Err(Error::Invalid(format!(
                "templates {} and {} are not similar",
                a.name, b.name
            )));
        }
        Ok(PromiseTemplate { a, b })
    }

    /// Degenerate template (A, A), used by the round-trip laws.
    pub fn diagonal(a: Structure) -> PromiseTemplate {
        PromiseTemplate { a: a.clone(), b: a }
    }
}

/// Union-find partition of 0..n with path halving.
#[derive(Debug, Clone)]
pub struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize) -> Partition {
        Partition { parent: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Lower index wins so class representatives are stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Contiguous renumbering: old element -> class index, classes ordered by
    /// smallest member. Returns (class count, old -> new map).
    pub fn class_map(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if map[r] == usize::MAX {
                map[r] = next;
                next += 1;
            }
            map[x] = map[r];
        }
        (next, map)
    }
}

/// Mixed-radix encoding, most significant digit first (argument 1 first).
pub fn encode_tuple(args: &[usize], base: usize) -> usize {
    let mut idx = 0;
    for &a in args {
        debug_assert!(a < base);
        idx = idx * base + a;
    }
    idx
}

pub fn decode_tuple(mut idx: usize, base: usize, arity: usize) -> Tuple {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

/// n-th power: domain A^n under the mixed-radix encoding; a k-tuple of
/// n-tuples is in R iff every column is in R of `s`.
pub fn power(s: &Structure, n: usize, cap: &SizeCap) -> Result<Structure> {
    if n == 0 {
        return Err(Error::Invalid("power exponent must be >= 1".into()));
    }
    let size = (s.domain_size as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    cap.check_elements(&format!("power({}, {}) domain", s.name, n), size)?;
    let size = size as usize;

    let mut relations = Vec::with_capacity(s.relations.len());
    for (decl, tuples) in s.signature.relations.iter().zip(&s.relations) {
        let count = (tuples.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        cap.check_tuples(&format!("power({}, {}) relation {}", s.name, n, decl.name), count)?;
        let mut out = Vec::with_capacity(count as usize);
        // Choice vector: one tuple of R^A per power coordinate.
        let mut choice = vec![0usize; n];
        if !tuples.is_empty() {
            loop {
                let mut row = Vec::with_capacity(decl.arity);
                for i in 0..decl.arity {
                    let mut args = Vec::with_capacity(n);
                    for &c in &choice {
                        args.push(tuples[c][i]);
                    }
                    row.push(encode_tuple(&args, s.domain_size));
                }
                out.push(row);
                // Advance the choice vector (last coordinate fastest).
                let mut j = n;
                loop {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                    choice[j] += 1;
                    if choice[j] < tuples.len() {
                        break;
                    }
                    choice[j] = 0;
                }
                if choice.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
        relations.push(out);
    }
    Structure::new(
        format!("{}^{}", s.name, n),
        size,
        s.signature.clone(),
        relations,
    )
}

/// Quotient by a partition. Returns the quotient structure together with the
/// old -> new index map.
pub fn quotient(s: &Structure, p: &mut Partition) -> Result<(Structure, Vec<usize>)> {
    if p.len() != s.domain_size {
        return Err(Error::Invalid(format!(
            "partition over {} elements applied to structure with {}",
            p.len(),
            s.domain_size
        )));
    }
    let (classes, map) = p.class_map();
    let relations = s
        .relations
        .iter()
        .map(|tuples| {
            tuples
                .iter()
                .map(|t| t.iter().map(|&e| map[e]).collect())
                .collect()
        })
        .collect();
    let q = Structure::new(
        format!("{}/~", s.name),
        classes,
        s.signature.clone(),
        relations,
    )?;
    Ok((q, map))
}

/// Disjoint union of similar structures. Returns the union together with the
/// element offset of each part.
pub fn disjoint_union(parts: &[&Structure]) -> Result<(Structure, Vec<usize>)> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Invalid("disjoint union of zero structures".into()))?;
    let mut offsets = Vec::with_capacity(parts.len());
    let mut size = 0usize;
    for p in parts {
        if !p.similar_to(first) {
            return Err(Error::Invalid(format!(
                "signature mismatch in disjoint union: {} vs {}",
                first.name, p.name
            )));
        }
        offsets.push(size);
        size += p.domain_size;
    }
    let mut relations = vec![Vec::new(); first.signature.relations.len()];
    for (p, &off) in parts.iter().zip(&offsets) {
        for (r, tuples) in p.relations.iter().enumerate() {
            for t in tuples {
                relations[r].push(t.iter().map(|&e| e + off).collect());
            }
        }
    }
    let u = Structure::new(
        parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+"),
        size,
        first.signature.clone(),
        relations,
    )?;
    Ok((u, offsets))
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut name: Option<String> = None;
    let mut domain: Option<usize> = None;
    let mut decls: Vec<(String, usize)> = Vec::new();
    let mut tuple_lists: Vec<Vec<Tuple>> = Vec::new();
    let mut saw_end = false;

    let err = |line: usize, msg: String| Error::Parse { line, msg };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if saw_end {
            return Err(err(line_no, "content after end".into()));
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "structure" => {
                let n = words
                    .next()
                    .ok_or_else(|| err(line_no, "missing structure name".into()))?;
                name = Some(n.to_string());
            }
            "domain" => {
                let n = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(line_no, "bad domain size".into()))?;
                domain = Some(n);
            }
            "relation" => {
                let rname = words
                    .next()
                    .ok_or_else(|| err(line_no, "missing relation name".into()))?;
                let arity: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(line_no, "bad relation arity".into()))?;
                decls.push((rname.to_string(), arity));
                tuple_lists.push(Vec::new());
            }
            "end" => saw_end = true,
            _ => {
                // A tuple line for the most recent relation.
                let list = tuple_lists
                    .last_mut()
                    .ok_or_else(|| err(line_no, "tuple before any relation".into()))?;
                let mut tuple = Vec::new();
                for w in std::iter::once(head).chain(words) {
                    let e: usize = w
                        .parse()
                        .map_err(|_| err(line_no, format!("bad element {:?}", w)))?;
                    tuple.push(e);
                }
                let arity = decls.last().unwrap().1;
                if tuple.len() != arity {
                    return Err(err(
                        line_no,
                        format!("tuple has {} entries, relation arity is {}", tuple.len(), arity),
                    ));
                }
                let dom = domain.ok_or_else(|| err(line_no, "tuple before domain".into()))?;
                if let Some(&e) = tuple.iter().find(|&&e| e >= dom) {
                    return Err(err(line_no, format!("element {} out of range", e)));
                }
                list.push(tuple);
            }
        }
    }
    if !saw_end {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing end".into() });
    }
    let name = name.ok_or_else(|| Error::Parse { line: 1, msg: "missing structure header".into() })?;
    let domain = domain.ok_or_else(|| Error::Parse { line: 1, msg: "missing domain".into() })?;
    Structure::new(name, domain, Signature::new(decls)?, tuple_lists)
}

pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::new();
    writeln!(out, "structure {}", s.name).unwrap();
    writeln!(out, "domain {}", s.domain_size).unwrap();
    for (decl, tuples) in s.signature.relations.iter().zip(&s.relations) {
        writeln!(out, "relation {} {}", decl.name, decl.arity).unwrap();
        for t in tuples {
            let words: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            writeln!(out, "{}", words.join(" ")).unwrap();
        }
    }
    writeln!(out, "end").unwrap();
    out
}

fn graph_signature() -> Signature {
    Signature::new(vec![("edge", 2)]).unwrap()
}

/// Complete graph K_k (loopless inequality relation).
pub fn clique(k: usize) -> Structure {
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                edges.push(vec![i, j]);
            }
        }
    }
    Structure::new(format!("K{}", k), k, graph_signature(), vec![edges]).unwrap()
}

/// Cycle C_n with both edge directions.
pub fn cycle(n: usize) -> Structure {
    let mut edges = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.push(vec![i, j]);
        edges.push(vec![j, i]);
    }
    Structure::new(format!("C{}", n), n, graph_signature(), vec![edges]).unwrap()
}

/// Not-all-equal template H_k: domain k, ternary relation of non-constant
/// triples.
pub fn nae(k: usize) -> Structure {
    let mut tuples = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if !(a == b && b == c) {
                    tuples.push(vec![a, b, c]);
                }
            }
        }
    }
    Structure::new(
        format!("H{}", k),
        k,
        Signature::new(vec![("nae", 3)]).unwrap(),
        vec![tuples],
    )
    .unwrap()
}

/// 1-in-3 template T over {0,1}: triples with exactly one 1.
pub fn one_in_three() -> Structure {
    Structure::new(
        "T",
        2,
        Signature::new(vec![("r", 3)]).unwrap(),
        vec![vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]],
    )
    .unwrap()
}

/// Horn template H over {0,1}: x&y -> z, x&y -> !z, {0}, {1}.
pub fn horn() -> Structure {
    let mut impl_pos = Vec::new(); // all (x,y,z) except (1,1,0)
    let mut impl_neg = Vec::new(); // all (x,y,z) except (1,1,1)
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                if !(x == 1 && y == 1 && z == 0) {
                    impl_pos.push(vec![x, y, z]);
                }
                if !(x == 1 && y == 1 && z == 1) {
                    impl_neg.push(vec![x, y, z]);
                }
            }
        }
    }
    Structure::new(
        "H",
        2,
        Signature::new(vec![("imp", 3), ("impneg", 3), ("zero", 1), ("one", 1)]).unwrap(),
        vec![impl_pos, impl_neg, vec![vec![0]], vec![vec![1]]],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_counts() {
        let k3 = clique(3);
        assert_eq!(k3.domain_size, 3);
        assert_eq!(k3.relations[0].len(), 6);
        assert!(k3.contains(0, &[0, 1]));
        assert!(!k3.contains(0, &[1, 1]));
    }

    #[test]
    fn power_of_k3_squared() {
        let p = power(&clique(3), 2, &SizeCap::default()).unwrap();
        assert_eq!(p.domain_size, 9);
        assert_eq!(p.relations[0].len(), 36);
        // Degree count: every vertex should have 4 out-neighbours.
        for v in 0..9 {
            let deg = p.relations[0].iter().filter(|t| t[0] == v).count();
            assert_eq!(deg, 4);
        }
    }

    #[test]
    fn power_of_k2_squared_edges() {
        let p = power(&clique(2), 2, &SizeCap::default()).unwrap();
        // (0,0)-(1,1) and (0,1)-(1,0), both directions.
        let e = |a: &[usize], b: &[usize]| {
            vec![encode_tuple(a, 2), encode_tuple(b, 2)]
        };
        let expected = {
            let mut v = vec![
                e(&[0, 0], &[1, 1]),
                e(&[1, 1], &[0, 0]),
                e(&[0, 1], &[1, 0]),
                e(&[1, 0], &[0, 1]),
            ];
            v.sort();
            v
        };
        assert_eq!(p.relations[0], expected);
    }

    #[test]
    fn power_one_is_identity() {
        let k3 = clique(3);
        let p = power(&k3, 1, &SizeCap::default()).unwrap();
        assert_eq!(p.domain_size, k3.domain_size);
        assert_eq!(p.relations, k3.relations);
    }

    #[test]
    fn power_respects_cap() {
        let cap = SizeCap { max_elements: 8, max_tuples: 1000 };
        assert!(matches!(
            power(&clique(3), 2, &cap),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn quotient_merges_and_loops() {
        let p = power(&clique(2), 2, &SizeCap::default()).unwrap();
        let mut part = Partition::new(4);
        part.union(encode_tuple(&[0, 0], 2), encode_tuple(&[1, 1], 2));
        let (q, map) = quotient(&p, &mut part).unwrap();
        assert_eq!(q.domain_size, 3);
        let merged = map[encode_tuple(&[0, 0], 2)];
        assert_eq!(merged, map[encode_tuple(&[1, 1], 2)]);
        // The edge inside the merged class becomes a loop.
        assert!(q.contains(0, &[merged, merged]));
    }

    #[test]
    fn quotient_identity() {
        let k3 = clique(3);
        let mut part = Partition::new(3);
        let (q, map) = quotient(&k3, &mut part).unwrap();
        assert_eq!(q.domain_size, 3);
        assert_eq!(q.relations, k3.relations);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn quotient_join_law() {
        // Quotient by p then by (induced) q equals quotient by the join.
        let s = cycle(6);
        let mut p1 = Partition::new(6);
        p1.union(0, 3);
        let (q1, map1) = quotient(&s, &mut p1.clone()).unwrap();
        let mut p2 = Partition::new(q1.domain_size);
        p2.union(map1[1], map1[4]);
        let (q12, _) = quotient(&q1, &mut p2).unwrap();

        let mut join = Partition::new(6);
        join.union(0, 3);
        join.union(1, 4);
        let (qj, _) = quotient(&s, &mut join).unwrap();
        assert_eq!(q12.domain_size, qj.domain_size);
        assert_eq!(q12.relations, qj.relations);
    }

    #[test]
    fn union_counts() {
        let (u, offs) = disjoint_union(&[&clique(2), &clique(2)]).unwrap();
        assert_eq!(u.domain_size, 4);
        assert_eq!(offs, vec![0, 2]);
        assert_eq!(u.relations[0].len(), 4);
        assert!(u.contains(0, &[2, 3]));
        assert!(!u.contains(0, &[1, 2]));
    }

    #[test]
    fn union_738() {
        let cap = SizeCap::default();
        let k3 = clique(3);
        let p2 = power(&k3, 2, &cap).unwrap();
        let p6 = power(&k3, 6, &cap).unwrap();
        let (u, _) = disjoint_union(&[&p2, &p6]).unwrap();
        assert_eq!(u.domain_size, 738);
    }

    #[test]
    fn parse_roundtrip() {
        let k3 = clique(3);
        let text = serialize_structure(&k3);
        let back = parse_structure(&text).unwrap();
        assert_eq!(back, k3);
    }

    #[test]
    fn parse_errors() {
        let text = "structure X\ndomain 3\nrelation e 2\n0 3\nend\n";
        match parse_structure(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("out of range"), "{}", msg);
            }
            other => panic!("expected parse error, got {:?}", other),
        }
        assert!(parse_structure("structure X\ndomain 2\n").is_err());
        assert!(parse_structure("structure X\ndomain 2\nrelation e 2\n0\nend\n").is_err());
    }

    #[test]
    fn horn_shape() {
        let h = horn();
        assert_eq!(h.relations[0].len(), 7);
        assert_eq!(h.relations[1].len(), 7);
        assert!(!h.contains(0, &[1, 1, 0]));
        assert!(!h.contains(1, &[1, 1, 1]));
    }

    #[test]
    fn nae_shape() {
        let h2 = nae(2);
        assert_eq!(h2.relations[0].len(), 6);
        let h3 = nae(3);
        assert_eq!(h3.relations[0].len(), 24);
    }

    #[test]
    fn encode_msb_first() {
        // Argument 1 is the most significant digit.
        assert_eq!(encode_tuple(&[1, 0], 3), 3);
        assert_eq!(encode_tuple(&[0, 1], 3), 1);
        assert_eq!(decode_tuple(5, 3, 2), vec![1, 2]);
    }
}
