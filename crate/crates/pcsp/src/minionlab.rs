//! Function tables, minors, polymorphism testing and enumeration, essential
//! coordinates, fixing sets, and the library of explicit witness functions.

use crate::core::{
    clique, decode_tuple, encode_tuple, nae, one_in_three, power, PromiseTemplate,
};
use crate::homsearch::enumerate_homs;
use crate::{Error, Result, SizeCap};
use itertools::Itertools;
use std::fmt::Write as _;

/// A total function A^n -> B stored as an output sequence indexed mixed-radix
/// by the input tuple, most significant digit on argument 1. This matches the
/// power-structure vertex encoding, so a homomorphism vector from
/// `power(a, n)` to `b` *is* a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub name: String,
    pub in_domain: usize,
    pub out_domain: usize,
    pub arity: usize,
    pub values: Vec<usize>,
}

impl FunctionTable {
    pub fn new(
        name: impl Into<String>,
        in_domain: usize,
        out_domain: usize,
        arity: usize,
        values: Vec<usize>,
    ) -> Result<FunctionTable> {
        let name = name.into();
        let expect = in_domain.pow(arity as u32);
        if values.len() != expect {
            return Err(Error::Invalid(format!(
                "function {}: {} outputs, expected {}",
                name,
                values.len(),
                expect
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= out_domain) {
            return Err(Error::Invalid(format!(
                "function {}: output {} out of range {}",
                name, v, out_domain
            )));
        }
        Ok(FunctionTable { name, in_domain, out_domain, arity, values })
    }

    pub fn from_fn(
        name: impl Into<String>,
        in_domain: usize,
        out_domain: usize,
        arity: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<FunctionTable> {
        let size = in_domain.pow(arity as u32);
        let mut values = Vec::with_capacity(size);
        for idx in 0..size {
            values.push(f(&decode_tuple(idx, in_domain, arity)));
        }
        FunctionTable::new(name, in_domain, out_domain, arity, values)
    }

    #[inline]
    pub fn eval(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        self.values[encode_tuple(args, self.in_domain)]
    }

    pub fn is_projection(&self) -> Option<usize> {
        (0..self.arity).find(|&i| {
            (0..self.values.len())
                .all(|idx| self.values[idx] == decode_tuple(idx, self.in_domain, self.arity)[i])
        })
    }
}

/// Projection p_i of the given arity (1-based coordinate in documentation,
/// 0-based here).
pub fn projection(domain: usize, arity: usize, i: usize) -> FunctionTable {
    FunctionTable::from_fn(format!("p{}", i + 1), domain, domain, arity, |args| args[i]).unwrap()
}

/// Minor map pi: positions of the minor-taking symbol into [n].
pub type MinorMap = Vec<usize>;

/// h(x_1,..,x_n) = g(x_{pi(1)},..,x_{pi(m)}).
pub fn minor_of(g: &FunctionTable, pi: &[usize], n: usize) -> Result<FunctionTable> {
    if pi.len() != g.arity {
        return Err(Error::Invalid(format!(
            "minor map has {} entries for arity {}",
            pi.len(),
            g.arity
        )));
    }
    if let Some(&p) = pi.iter().find(|&&p| p >= n) {
        return Err(Error::Invalid(format!("minor map entry {} out of range {}", p, n)));
    }
    FunctionTable::from_fn(
        format!("{}/minor", g.name),
        g.in_domain,
        g.out_domain,
        n,
        |args| {
            let g_args: Vec<usize> = pi.iter().map(|&p| args[p]).collect();
            g.eval(&g_args)
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyCheck {
    Ok,
    /// One violating column list: the chosen tuples of R^A, one per argument
    /// of the function, whose row-wise image leaves R^B.
    Violation { relation: String, columns: Vec<Vec<usize>> },
}

impl PolyCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, PolyCheck::Ok)
    }
}

const DIRECT_LIMIT: u128 = 4_000_000;

/// Checks the matrix condition: for every relation R and every choice of
/// `arity` tuples from R^A (as columns), the row-wise image is in R^B.
///
/// Relations whose direct check exceeds the work limit fall back to a
/// tensor-transform count when binary; otherwise the check reports a size
/// error.
pub fn is_polymorphism(f: &FunctionTable, t: &PromiseTemplate) -> Result<PolyCheck> {
    if f.in_domain != t.a.domain_size || f.out_domain != t.b.domain_size {
        return Err(Error::Invalid(format!(
            "function {} has domains {}/{}, template has {}/{}",
            f.name, f.in_domain, f.out_domain, t.a.domain_size, t.b.domain_size
        )));
    }
    let n = f.arity;
    for (r, decl) in t.a.signature.relations.iter().enumerate() {
        let tuples = &t.a.relations[r];
        if tuples.is_empty() {
            continue;
        }
        let work = (tuples.len() as u128).pow(n as u32);
        if work <= DIRECT_LIMIT {
            if let Some(v) = direct_violation(f, t, r) {
                return Ok(v);
            }
        } else if decl.arity == 2 {
            if let Some(v) = graph_violation(f, t, r) {
                return Ok(v);
            }
        } else {
            return Err(Error::SizeCap {
                what: format!("is_polymorphism over relation {}", decl.name),
                needed: work,
                cap: DIRECT_LIMIT,
            });
        }
    }
    Ok(PolyCheck::Ok)
}

fn direct_violation(f: &FunctionTable, t: &PromiseTemplate, r: usize) -> Option<PolyCheck> {
    let tuples = &t.a.relations[r];
    let k = t.a.signature.arity(r);
    let n = f.arity;
    let mut choice = vec![0usize; n];
    let mut args = vec![0usize; n];
    loop {
        let mut image = Vec::with_capacity(k);
        for i in 0..k {
            for (j, &c) in choice.iter().enumerate() {
                args[j] = tuples[c][i];
            }
            image.push(f.eval(&args));
        }
        if !t.b.contains(r, &image) {
            return Some(PolyCheck::Violation {
                relation: t.a.signature.relations[r].name.clone(),
                columns: choice.iter().map(|&c| tuples[c].clone()).collect(),
            });
        }
        let mut j = n;
        loop {
            if j == 0 {
                return None;
            }
            j -= 1;
            choice[j] += 1;
            if choice[j] < tuples.len() {
                break;
            }
            choice[j] = 0;
        }
    }
}

/// Apply the d x d 0/1 matrix `m` along every axis of the length-d^n count
/// vector: out[u] = number of v with m[u_i][v_i] = 1 for all i and vec[v] = 1.
fn tensor_neighbour_counts(indicator: &[u64], m: &[Vec<u64>], d: usize, n: usize) -> Vec<u64> {
    let mut v = indicator.to_vec();
    let mut tmp = vec![0u64; d];
    for axis in 0..n {
        let stride = d.pow((n - 1 - axis) as u32);
        let block = stride * d;
        let mut base = 0;
        while base < v.len() {
            for off in 0..stride {
                for (x, t) in tmp.iter_mut().enumerate() {
                    let mut acc = 0;
                    for y in 0..d {
                        if m[x][y] != 0 {
                            acc += v[base + off + y * stride];
                        }
                    }
                    *t = acc;
                }
                for (x, &t) in tmp.iter().enumerate() {
                    v[base + off + x * stride] = t;
                }
            }
            base += block;
        }
    }
    v
}

/// Violation search for one binary relation via per-output-class neighbour
/// counting; avoids the |R^A|^n direct loop.
fn graph_violation(f: &FunctionTable, t: &PromiseTemplate, r: usize) -> Option<PolyCheck> {
    let d = t.a.domain_size;
    let n = f.arity;
    let mut adj = vec![vec![0u64; d]; d];
    for tu in &t.a.relations[r] {
        adj[tu[0]][tu[1]] = 1;
    }
    let size = f.values.len();
    let mut class_indicator = vec![vec![0u64; size]; f.out_domain];
    for (idx, &c) in f.values.iter().enumerate() {
        class_indicator[c][idx] = 1;
    }
    for c1 in 0..f.out_domain {
        let counts = tensor_neighbour_counts(&class_indicator[c1], &adj, d, n);
        for c0 in 0..f.out_domain {
            if t.b.contains(r, &[c0, c1]) {
                continue;
            }
            for u in 0..size {
                if f.values[u] == c0 && counts[u] > 0 {
                    // Recover a concrete neighbour v in class c1.
                    let ut = decode_tuple(u, d, n);
                    for v in 0..size {
                        if f.values[v] != c1 {
                            continue;
                        }
                        let vt = decode_tuple(v, d, n);
                        if ut.iter().zip(&vt).all(|(&a, &b)| adj[a][b] != 0) {
                            let columns = ut
                                .iter()
                                .zip(&vt)
                                .map(|(&a, &b)| vec![a, b])
                                .collect();
                            return Some(PolyCheck::Violation {
                                relation: t.a.signature.relations[r].name.clone(),
                                columns,
                            });
                        }
                    }
                    unreachable!("positive neighbour count without a neighbour");
                }
            }
        }
    }
    None
}

/// All n-ary members of Pol(A,B) in lexicographic table order.
pub fn enumerate_polymorphisms(
    t: &PromiseTemplate,
    n: usize,
    cap: usize,
    size_cap: &SizeCap,
) -> Result<(Vec<FunctionTable>, bool)> {
    let pw = power(&t.a, n, size_cap)?;
    let (homs, truncated) = enumerate_homs(&pw, &t.b, cap)?;
    let tables = homs
        .into_iter()
        .enumerate()
        .map(|(i, h)| FunctionTable {
            name: format!("pol{}_{}", n, i),
            in_domain: t.a.domain_size,
            out_domain: t.b.domain_size,
            arity: n,
            values: h,
        })
        .collect();
    Ok((tables, truncated))
}

/// Coordinates where changing a single argument can change the output.
pub fn essential_coordinates(f: &FunctionTable) -> Vec<usize> {
    let d = f.in_domain;
    let n = f.arity;
    let mut out = Vec::new();
    'coord: for i in 0..n {
        let stride = d.pow((n - 1 - i) as u32);
        let block = stride * d;
        let mut base = 0;
        while base < f.values.len() {
            for off in 0..stride {
                let first = f.values[base + off];
                for x in 1..d {
                    if f.values[base + off + x * stride] != first {
                        out.push(i);
                        continue 'coord;
                    }
                }
            }
            base += block;
        }
    }
    out
}

/// Smallest set I (by size, then lexicographic) such that f is 0 whenever
/// all I-coordinates are 0 and 1 whenever all are 1. Boolean functions only.
pub fn min_fixing_set(f: &FunctionTable) -> Result<Option<Vec<usize>>> {
    if f.in_domain != 2 || f.out_domain != 2 {
        return Err(Error::Invalid("fixing sets are defined for Boolean tables".into()));
    }
    let n = f.arity;
    for size in 1..=n {
        'subset: for set in (0..n).combinations(size) {
            for (idx, &v) in f.values.iter().enumerate() {
                let args = decode_tuple(idx, 2, n);
                if set.iter().all(|&i| args[i] == 0) && v != 0 {
                    continue 'subset;
                }
                if set.iter().all(|&i| args[i] == 1) && v != 1 {
                    continue 'subset;
                }
            }
            return Ok(Some(set));
        }
    }
    Ok(None)
}

pub fn serialize_function(f: &FunctionTable) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "function {} in {} out {} arity {}",
        f.name, f.in_domain, f.out_domain, f.arity
    )
    .unwrap();
    for chunk in f.values.chunks(20) {
        let words: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", words.join(" ")).unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

pub fn parse_function(text: &str) -> Result<FunctionTable> {
    let mut header: Option<(String, usize, usize, usize)> = None;
    let mut values = Vec::new();
    let mut saw_end = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if saw_end {
            return Err(Error::Parse { line: line_no, msg: "content after end".into() });
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "function" {
            if words.len() != 8 || words[2] != "in" || words[4] != "out" || words[6] != "arity" {
                return Err(Error::Parse { line: line_no, msg: "bad function header".into() });
            }
            let parse = |w: &str| -> Result<usize> {
                w.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad number {:?}", w),
                })
            };
            header = Some((words[1].to_string(), parse(words[3])?, parse(words[5])?, parse(words[7])?));
        } else if words[0] == "end" {
            saw_end = true;
        } else {
            for w in words {
                values.push(w.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad output {:?}", w),
                })?);
            }
        }
    }
    if !saw_end {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing end".into() });
    }
    let (name, ind, outd, arity) =
        header.ok_or_else(|| Error::Parse { line: 1, msg: "missing function header".into() })?;
    FunctionTable::new(name, ind, outd, arity, values)
}

fn check_identity_chain(tables: &[(&FunctionTable, Vec<usize>)], n: usize, d: usize) -> bool {
    // All minors listed must agree pointwise as n-ary functions.
    let size = d.pow(n as u32);
    for idx in 0..size {
        let args = decode_tuple(idx, d, n);
        let mut vals = tables.iter().map(|(g, pi)| {
            let g_args: Vec<usize> = pi.iter().map(|&p| args[p]).collect();
            g.eval(&g_args)
        });
        let first = vals.next().unwrap();
        if vals.any(|v| v != first) {
            return false;
        }
    }
    true
}

/// The 6-ary function witnessing an Olsak function in Pol(K_k, K_2k):
/// x_1 if x_1 = x_2 or x_1 = x_3; x_2 if x_2 = x_3; x_1 + k otherwise.
pub fn olsak_k_2k(k: usize) -> Result<FunctionTable> {
    if k < 2 {
        return Err(Error::Invalid("olsak_k_2k needs k >= 2".into()));
    }
    let f = FunctionTable::from_fn(format!("olsak{}", k), k, 2 * k, 6, |x| {
        if x[0] == x[1] || x[0] == x[2] {
            x[0]
        } else if x[1] == x[2] {
            x[1]
        } else {
            x[0] + k
        }
    })?;
    let t = PromiseTemplate::new(clique(k), clique(2 * k))?;
    assert!(is_polymorphism(&f, &t)?.is_ok(), "olsak_k_2k({}) table broken", k);
    for x in 0..k {
        for y in 0..k {
            let a = f.eval(&[x, x, y, y, y, x]);
            let b = f.eval(&[x, y, x, y, x, y]);
            let c = f.eval(&[y, x, x, x, y, y]);
            assert!(a == b && b == c, "olsak identities broken at ({}, {})", x, y);
        }
    }
    Ok(f)
}

/// Directed edge listing used for the K_4 loop condition: for each pair
/// u < v both directions consecutively, pairs in lexicographic order.
pub fn k4_edge_list() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            out.push((u, v));
            out.push((v, u));
        }
    }
    out
}

/// The explicit pair (t, s) witnessing the K_4 loop condition in
/// Pol(K_3, K_6): t(x_1..x_4) = x_1 if x_1 = x_2 = x_3, else x_4 + 3; the
/// 12-ary s feeds edge-indexed arguments through t when they are consistent
/// with a source (or target) labelling and falls back to its first argument.
pub fn k4loop_in_k3_k6() -> Result<(FunctionTable, FunctionTable)> {
    let t = FunctionTable::from_fn("k4loop_t", 3, 6, 4, |x| {
        if x[0] == x[1] && x[1] == x[2] {
            x[0]
        } else {
            x[3] + 3
        }
    })?;
    let edges = k4_edge_list();
    let label_consistent = |args: &[usize], pick: fn(&(usize, usize)) -> usize| -> Option<Vec<usize>> {
        let mut lab = [usize::MAX; 4];
        for (p, e) in edges.iter().enumerate() {
            let i = pick(e);
            if lab[i] == usize::MAX {
                lab[i] = args[p];
            } else if lab[i] != args[p] {
                return None;
            }
        }
        Some(lab.to_vec())
    };
    let t2 = t.clone();
    let s = FunctionTable::from_fn("k4loop_s", 3, 6, 12, move |args| {
        if let Some(lab) = label_consistent(args, |e| e.0) {
            t2.eval(&lab)
        } else if let Some(lab) = label_consistent(args, |e| e.1) {
            t2.eval(&lab)
        } else {
            args[0]
        }
    })?;

    let tpl = PromiseTemplate::new(clique(3), clique(6))?;
    assert!(is_polymorphism(&t, &tpl)?.is_ok(), "k4loop t table broken");
    assert!(is_polymorphism(&s, &tpl)?.is_ok(), "k4loop s table broken");
    // The two loop identities: s applied to a source (resp. target)
    // labelling of the edges equals t.
    let src: Vec<usize> = edges.iter().map(|e| e.0).collect();
    let tgt: Vec<usize> = edges.iter().map(|e| e.1).collect();
    assert!(
        check_identity_chain(&[(&t, (0..4).collect()), (&s, src)], 4, 3),
        "k4loop source identity broken"
    );
    assert!(
        check_identity_chain(&[(&t, (0..4).collect()), (&s, tgt)], 4, 3),
        "k4loop target identity broken"
    );
    Ok((t, s))
}

/// Example witness in Pol(H_2, H_k), k >= 4: a if at least 3 arguments equal
/// a, else x + 2.
pub fn example_2_16_g(k: usize) -> Result<FunctionTable> {
    if k < 4 {
        return Err(Error::Invalid("example_2_16_g needs k >= 4".into()));
    }
    let g = FunctionTable::from_fn(format!("ex216_g{}", k), 2, k, 4, |x| {
        for a in 0..2 {
            if x.iter().filter(|&&v| v == a).count() >= 3 {
                return a;
            }
        }
        x[0] + 2
    })?;
    let t = PromiseTemplate::new(nae(2), nae(k))?;
    assert!(is_polymorphism(&g, &t)?.is_ok(), "example_2_16_g table broken");
    Ok(g)
}

/// Example witness in Pol(K_3, K_5): the five-case table.
pub fn example_2_17_g() -> Result<FunctionTable> {
    let g = FunctionTable::from_fn("ex217_g", 3, 5, 4, |x| {
        for a in 0..3 {
            if x.iter().filter(|&&v| v == a).count() >= 3 {
                return a;
            }
        }
        let (y, z, u) = (x[1], x[2], x[3]);
        if x[0] == 0 {
            if [y, z, u].iter().any(|&v| v == 0) {
                return 0;
            }
            if [y, z, u].iter().filter(|&&v| v == 1).count() >= 2 {
                return 1;
            }
            if [y, z, u].iter().filter(|&&v| v == 2).count() >= 2 {
                return 2;
            }
        }
        x[0] + 2
    })?;
    let t = PromiseTemplate::new(clique(3), clique(5))?;
    assert!(is_polymorphism(&g, &t)?.is_ok(), "example_2_17_g table broken");
    Ok(g)
}

/// Hamming threshold f_k of arity 3k-1 over (T, H_2): 1 iff weight >= k.
pub fn hamming_threshold(k: usize) -> Result<FunctionTable> {
    if k < 1 {
        return Err(Error::Invalid("hamming_threshold needs k >= 1".into()));
    }
    let n = 3 * k - 1;
    let f = FunctionTable::from_fn(format!("ham{}", k), 2, 2, n, |x| {
        usize::from(x.iter().sum::<usize>() >= k)
    })?;
    if 3u128.pow(n as u32) <= DIRECT_LIMIT {
        let t = PromiseTemplate::new(one_in_three(), nae(2))?;
        assert!(is_polymorphism(&f, &t)?.is_ok(), "hamming_threshold({}) broken", k);
    }
    Ok(f)
}

fn check_alternating(f: &FunctionTable) -> bool {
    let n = f.arity;
    let d = f.in_domain;
    let size = f.values.len();
    // Invariance under the parity-preserving generators (i, i+2).
    for i in 0..n.saturating_sub(2) {
        for idx in 0..size {
            let mut args = decode_tuple(idx, d, n);
            args.swap(i, i + 2);
            if f.eval(&args) != f.values[idx] {
                return false;
            }
        }
    }
    // Cancellation: f(x_1..x_{n-2}, y, y) does not depend on y.
    for idx in 0..d.pow((n - 2) as u32) {
        let prefix = decode_tuple(idx, d, n - 2);
        let mut vals = (0..d).map(|y| {
            let mut args = prefix.clone();
            args.push(y);
            args.push(y);
            f.eval(&args)
        });
        let first = vals.next().unwrap();
        if vals.any(|v| v != first) {
            return false;
        }
    }
    true
}

/// Alternating threshold of odd arity: 1 iff x_1 - x_2 + x_3 - ... > 0.
pub fn alternating_threshold(n: usize) -> Result<FunctionTable> {
    if n % 2 == 0 || n == 0 {
        return Err(Error::Invalid("alternating_threshold needs odd arity".into()));
    }
    let f = FunctionTable::from_fn(format!("altthr{}", n), 2, 2, n, |x| {
        let s: i64 = x
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum();
        usize::from(s > 0)
    })?;
    assert!(check_alternating(&f), "alternating_threshold({}) broken", n);
    if 3u128.pow(n as u32) <= DIRECT_LIMIT {
        let t = PromiseTemplate::new(one_in_three(), nae(2))?;
        assert!(is_polymorphism(&f, &t)?.is_ok(), "alternating_threshold({}) broken", n);
    }
    Ok(f)
}

/// Parity (XOR) of odd arity; alternating but not a polymorphism of (T, H_2).
pub fn parity(n: usize) -> Result<FunctionTable> {
    if n % 2 == 0 || n == 0 {
        return Err(Error::Invalid("parity needs odd arity".into()));
    }
    let f = FunctionTable::from_fn(format!("parity{}", n), 2, 2, n, |x| {
        x.iter().sum::<usize>() % 2
    })?;
    assert!(check_alternating(&f), "parity({}) broken", n);
    Ok(f)
}
