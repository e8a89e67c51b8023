//! Minor conditions: representation, generators, triviality decision,
//! projection-fraction optimum, height-1 bipartization, and the Label Cover
//! bridge.

use crate::core::Structure;
use crate::minionlab::{minor_of, FunctionTable};
use crate::{Error, Result};
use itertools::Itertools;
use num::rational::Ratio;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    U,
    V,
    Unassigned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
    pub side: Side,
}

/// f(x_1,..,x_n) ~ g(x_{pi(1)},..,x_{pi(m)}): `pi` has one entry per
/// argument of the rhs symbol, each naming an lhs variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorIdentity {
    pub lhs: usize,
    pub rhs: usize,
    pub pi: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorCondition {
    pub name: String,
    pub symbols: Vec<FunctionSymbol>,
    pub identities: Vec<MinorIdentity>,
}

impl MinorCondition {
    pub fn new(
        name: impl Into<String>,
        symbols: Vec<FunctionSymbol>,
        identities: Vec<MinorIdentity>,
    ) -> Result<MinorCondition> {
        let c = MinorCondition { name: name.into(), symbols, identities };
        for (i, s) in c.symbols.iter().enumerate() {
            if c.symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Invalid(format!("duplicate symbol {}", s.name)));
            }
            if s.arity == 0 {
                return Err(Error::Invalid(format!("symbol {} has arity 0", s.name)));
            }
        }
        for id in &c.identities {
            let (l, r) = (&c.symbols[id.lhs], &c.symbols[id.rhs]);
            if id.pi.len() != r.arity {
                return Err(Error::Invalid(format!(
                    "identity {} ~ {}: map has {} entries for arity {}",
                    l.name,
                    r.name,
                    id.pi.len(),
                    r.arity
                )));
            }
            if id.pi.iter().any(|&p| p >= l.arity) {
                return Err(Error::Invalid(format!(
                    "identity {} ~ {}: variable index out of range",
                    l.name, r.name
                )));
            }
        }
        Ok(c)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn is_bipartite(&self) -> bool {
        self.identities.iter().all(|id| {
            self.symbols[id.lhs].side == Side::U && self.symbols[id.rhs].side == Side::V
        })
    }
}

/// Pointwise check of every identity under a symbol -> table assignment;
/// tables must share in/out domains and match the declared arities.
pub fn witness_satisfies(
    c: &MinorCondition,
    assignment: &BTreeMap<String, FunctionTable>,
) -> Result<bool> {
    let mut tables = Vec::with_capacity(c.symbols.len());
    for s in &c.symbols {
        let t = assignment
            .get(&s.name)
            .ok_or_else(|| Error::Invalid(format!("no table for symbol {}", s.name)))?;
        if t.arity != s.arity {
            return Err(Error::Invalid(format!(
                "table for {} has arity {}, expected {}",
                s.name, t.arity, s.arity
            )));
        }
        tables.push(t);
    }
    for id in &c.identities {
        let (f, g) = (tables[id.lhs], tables[id.rhs]);
        if f.in_domain != g.in_domain || f.out_domain != g.out_domain {
            return Err(Error::Invalid("mismatched table domains in witness".into()));
        }
        let m = minor_of(g, &id.pi, f.arity)?;
        if m.values != f.values {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both directions of every undirected edge {u,v}, pairs ordered
/// lexicographically, directions (u,v) then (v,u). Loops are rejected.
pub fn directed_edge_list(g: &Structure) -> Result<Vec<(usize, usize)>> {
    let rel = g
        .signature
        .relations
        .iter()
        .position(|r| r.arity == 2)
        .ok_or_else(|| Error::Invalid(format!("{} has no binary relation", g.name)))?;
    let mut out = Vec::new();
    for u in 0..g.domain_size {
        if g.contains(rel, &[u, u]) {
            return Err(Error::Invalid(format!("{} has a loop at {}", g.name, u)));
        }
        for v in u + 1..g.domain_size {
            if g.contains(rel, &[u, v]) || g.contains(rel, &[v, u]) {
                out.push((u, v));
                out.push((v, u));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum ConditionKind<'a> {
    Olsak,
    Siggers,
    GLoop(&'a Structure),
    Cyclic(usize),
    Symmetric(usize),
    TotallySymmetric(usize),
    Alternating(usize),
    MajorityRobust(usize),
    Example216,
    Example218,
}

fn sym(name: &str, side: Side, arity: usize) -> FunctionSymbol {
    FunctionSymbol { name: name.to_string(), arity, side }
}

fn olsak_pis() -> [Vec<usize>; 3] {
    // Columns of (x,x,y,y,y,x), (x,y,x,y,x,y), (y,x,x,x,y,y).
    [vec![0, 0, 1, 1, 1, 0], vec![0, 1, 0, 1, 0, 1], vec![1, 0, 0, 0, 1, 1]]
}

pub fn generate_condition(kind: ConditionKind<'_>) -> Result<MinorCondition> {
    match kind {
        ConditionKind::Olsak => {
            let ids = olsak_pis()
                .into_iter()
                .map(|pi| MinorIdentity { lhs: 0, rhs: 1, pi })
                .collect();
            MinorCondition::new("olsak", vec![sym("f", Side::U, 2), sym("o", Side::V, 6)], ids)
        }
        ConditionKind::Example218 => {
            let ids = olsak_pis()
                .into_iter()
                .map(|pi| MinorIdentity { lhs: 0, rhs: 1, pi })
                .collect();
            MinorCondition::new(
                "example_2_18",
                vec![sym("f", Side::U, 2), sym("g", Side::V, 6)],
                ids,
            )
        }
        ConditionKind::Siggers => MinorCondition::new(
            "siggers",
            vec![sym("f", Side::U, 3), sym("s", Side::V, 6)],
            vec![
                MinorIdentity { lhs: 0, rhs: 1, pi: vec![0, 1, 0, 2, 1, 2] },
                MinorIdentity { lhs: 0, rhs: 1, pi: vec![1, 0, 2, 0, 2, 1] },
            ],
        ),
        ConditionKind::GLoop(g) => {
            let edges = directed_edge_list(g)?;
            if edges.is_empty() {
                return Err(Error::Invalid(format!("{} has no edges", g.name)));
            }
            let n = g.domain_size;
            let src: Vec<usize> = edges.iter().map(|e| e.0).collect();
            let tgt: Vec<usize> = edges.iter().map(|e| e.1).collect();
            MinorCondition::new(
                format!("loop_{}", g.name),
                vec![sym("f", Side::U, n), sym("e", Side::V, edges.len())],
                vec![
                    MinorIdentity { lhs: 0, rhs: 1, pi: src },
                    MinorIdentity { lhs: 0, rhs: 1, pi: tgt },
                ],
            )
        }
        ConditionKind::Cyclic(p) => {
            if p < 2 {
                return Err(Error::Invalid("cyclic needs arity >= 2".into()));
            }
            let ident: Vec<usize> = (0..p).collect();
            let rot: Vec<usize> = (0..p).map(|j| (j + 1) % p).collect();
            MinorCondition::new(
                format!("cyclic{}", p),
                vec![sym("t", Side::U, p), sym("s", Side::V, p)],
                vec![
                    MinorIdentity { lhs: 0, rhs: 1, pi: ident },
                    MinorIdentity { lhs: 0, rhs: 1, pi: rot },
                ],
            )
        }
        ConditionKind::Symmetric(n) => {
            if n < 2 {
                return Err(Error::Invalid("symmetric needs arity >= 2".into()));
            }
            // One-symbol form over the adjacent-transposition generators;
            // bipartize_height1 turns it into checkable shape.
            let mut ids = Vec::new();
            for i in 0..n - 1 {
                let mut pi: Vec<usize> = (0..n).collect();
                pi.swap(i, i + 1);
                ids.push(MinorIdentity { lhs: 0, rhs: 0, pi });
            }
            MinorCondition::new(format!("symmetric{}", n), vec![sym("f", Side::Unassigned, n)], ids)
        }
        ConditionKind::TotallySymmetric(n) => {
            if n < 1 {
                return Err(Error::Invalid("totally_symmetric needs arity >= 1".into()));
            }
            let mut symbols: Vec<FunctionSymbol> = (1..=n)
                .map(|i| sym(&format!("f{}", i), Side::U, i))
                .collect();
            symbols.push(sym("g", Side::V, n));
            let g_idx = n;
            let mut ids = Vec::new();
            for i in 1..=n {
                // All surjections [n] -> [i], as rhs maps into f_i's variables.
                for pi in (0..n).map(|_| 0..i).multi_cartesian_product() {
                    if (0..i).all(|v| pi.contains(&v)) {
                        ids.push(MinorIdentity { lhs: i - 1, rhs: g_idx, pi });
                    }
                }
            }
            MinorCondition::new(format!("totally_symmetric{}", n), symbols, ids)
        }
        ConditionKind::Alternating(m) => {
            if m % 2 == 0 || m < 3 {
                return Err(Error::Invalid("alternating needs odd arity >= 3".into()));
            }
            // Parity-preserving generators (i, i+2) plus the cancellation
            // identity through an auxiliary symbol c.
            let mut ids = Vec::new();
            for i in 0..m - 2 {
                let mut pi: Vec<usize> = (0..m).collect();
                pi.swap(i, i + 2);
                ids.push(MinorIdentity { lhs: 0, rhs: 0, pi });
            }
            let mut pi_y: Vec<usize> = (0..m - 2).collect();
            pi_y.push(m - 2);
            pi_y.push(m - 2);
            let mut pi_z: Vec<usize> = (0..m - 2).collect();
            pi_z.push(m - 1);
            pi_z.push(m - 1);
            ids.push(MinorIdentity { lhs: 1, rhs: 0, pi: pi_y });
            ids.push(MinorIdentity { lhs: 1, rhs: 0, pi: pi_z });
            MinorCondition::new(
                format!("alternating{}", m),
                vec![sym("a", Side::Unassigned, m), sym("c", Side::Unassigned, m)],
                ids,
            )
        }
        ConditionKind::MajorityRobust(n) => {
            if n > 2 {
                return Err(Error::Invalid("majority_robust supports n <= 2".into()));
            }
            majority_robust(n)
        }
        ConditionKind::Example216 => MinorCondition::new(
            "example_2_16",
            vec![sym("f", Side::U, 2), sym("g", Side::V, 4)],
            vec![
                MinorIdentity { lhs: 0, rhs: 1, pi: vec![1, 0, 0, 0] },
                MinorIdentity { lhs: 0, rhs: 1, pi: vec![0, 1, 0, 0] },
                MinorIdentity { lhs: 0, rhs: 1, pi: vec![0, 0, 1, 0] },
                MinorIdentity { lhs: 0, rhs: 1, pi: vec![0, 0, 0, 1] },
            ],
        ),
    }
}

/// Iterated ternary majority of arity 3^n and its minimal true-sets.
fn majority_robust(n: usize) -> Result<MinorCondition> {
    let arity = 3usize.pow(n as u32);
    let maj = |bits: &[usize]| -> usize {
        // Evaluate the depth-n majority tree.
        let mut level: Vec<usize> = bits.to_vec();
        while level.len() > 1 {
            level = level
                .chunks(3)
                .map(|c| usize::from(c.iter().sum::<usize>() >= 2))
                .collect();
        }
        level[0]
    };
    let mut minimal_sets: Vec<Vec<usize>> = Vec::new();
    for size in 1..=arity {
        for set in (0..arity).combinations(size) {
            let mut bits = vec![0usize; arity];
            for &i in &set {
                bits[i] = 1;
            }
            if maj(&bits) == 1
                && !minimal_sets.iter().any(|m| m.iter().all(|x| set.contains(x)))
            {
                minimal_sets.push(set);
            }
        }
        if !minimal_sets.is_empty() && minimal_sets.iter().all(|m| m.len() == size) {
            // All minimal sets of an n-level majority share one cardinality.
            break;
        }
    }
    // f's variables: x_0, then one y per (set, unset coordinate) pair.
    let mut y_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut next = 1;
    for (si, set) in minimal_sets.iter().enumerate() {
        for j in 0..arity {
            if !set.contains(&j) {
                y_index.insert((si, j), next);
                next += 1;
            }
        }
    }
    let mut ids = Vec::new();
    for (si, set) in minimal_sets.iter().enumerate() {
        let pi: Vec<usize> = (0..arity)
            .map(|j| if set.contains(&j) { 0 } else { y_index[&(si, j)] })
            .collect();
        ids.push(MinorIdentity { lhs: 0, rhs: 1, pi });
    }
    MinorCondition::new(
        format!("majority_robust{}", n),
        vec![sym("f", Side::U, next), sym("g", Side::V, arity)],
        ids,
    )
}

/// Rewrite a condition with two-sided or shared symbols into bipartite form:
/// every original symbol moves to V and each identity gains a fresh U-symbol
/// e_j with e_j ~ lhs (identity map) and e_j ~ rhs (original map).
pub fn bipartize_height1(c: &MinorCondition) -> Result<MinorCondition> {
    if c.is_bipartite() {
        return Ok(c.clone());
    }
    let mut symbols: Vec<FunctionSymbol> = c
        .symbols
        .iter()
        .map(|s| FunctionSymbol { name: s.name.clone(), arity: s.arity, side: Side::V })
        .collect();
    let mut identities = Vec::new();
    for (j, id) in c.identities.iter().enumerate() {
        let arity = c.symbols[id.lhs].arity;
        let e_idx = symbols.len();
        symbols.push(FunctionSymbol { name: format!("e{}", j + 1), arity, side: Side::U });
        identities.push(MinorIdentity { lhs: e_idx, rhs: id.lhs, pi: (0..arity).collect() });
        identities.push(MinorIdentity { lhs: e_idx, rhs: id.rhs, pi: id.pi.clone() });
    }
    MinorCondition::new(format!("{}_bip", c.name), symbols, identities)
}

/// Count of identities satisfied by a (possibly partial) coordinate
/// assignment; identities touching unassigned symbols are not counted.
fn satisfied_count(c: &MinorCondition, assign: &[Option<usize>]) -> usize {
    c.identities
        .iter()
        .filter(|id| match (assign[id.lhs], assign[id.rhs]) {
            (Some(cl), Some(cr)) => id.pi[cr] == cl,
            _ => false,
        })
        .count()
}

/// Trivial iff some assignment of projections (one coordinate per symbol)
/// satisfies every identity. Returns the assignment on success.
pub fn is_trivial(c: &MinorCondition) -> Option<Vec<usize>> {
    fn dfs(c: &MinorCondition, assign: &mut Vec<Option<usize>>, s: usize) -> bool {
        if s == c.symbols.len() {
            return true;
        }
        for coord in 0..c.symbols[s].arity {
            assign[s] = Some(coord);
            let ok = c.identities.iter().all(|id| {
                match (assign[id.lhs], assign[id.rhs]) {
                    (Some(cl), Some(cr)) => id.pi[cr] == cl,
                    _ => true,
                }
            });
            if ok && dfs(c, assign, s + 1) {
                return true;
            }
        }
        assign[s] = None;
        false
    }
    let mut assign = vec![None; c.symbols.len()];
    if dfs(c, &mut assign, 0) {
        Some(assign.into_iter().map(|a| a.unwrap()).collect())
    } else {
        None
    }
}

/// Exact maximum fraction of identities simultaneously satisfiable by
/// projections, with a witness assignment (branch-and-bound).
pub fn max_projection_fraction(c: &MinorCondition) -> (Ratio<u64>, Vec<usize>) {
    let total = c.identities.len();
    if total == 0 {
        return (Ratio::from_integer(1), vec![0; c.symbols.len()]);
    }
    struct Ctx<'a> {
        c: &'a MinorCondition,
        best: usize,
        best_assign: Vec<usize>,
    }
    fn dfs(ctx: &mut Ctx<'_>, assign: &mut Vec<Option<usize>>, s: usize) {
        let sat = satisfied_count(ctx.c, assign);
        let undecided = ctx
            .c
            .identities
            .iter()
            .filter(|id| assign[id.lhs].is_none() || assign[id.rhs].is_none())
            .count();
        if sat + undecided <= ctx.best {
            return;
        }
        if s == ctx.c.symbols.len() {
            if sat > ctx.best {
                ctx.best = sat;
                ctx.best_assign = assign.iter().map(|a| a.unwrap()).collect();
            }
            return;
        }
        for coord in 0..ctx.c.symbols[s].arity {
            assign[s] = Some(coord);
            dfs(ctx, assign, s + 1);
        }
        assign[s] = None;
    }
    let mut ctx = Ctx { c, best: 0, best_assign: vec![0; c.symbols.len()] };
    // Seed so that even an all-unsatisfying condition returns an assignment.
    let mut assign = vec![None; c.symbols.len()];
    dfs(&mut ctx, &mut assign, 0);
    (Ratio::new(ctx.best as u64, total as u64), ctx.best_assign)
}

/// Label Cover instance: bipartite, with a projection from the labels of the
/// right endpoint to the labels of the left endpoint of each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCover {
    pub name: String,
    pub u_vertices: Vec<(String, usize)>,
    pub v_vertices: Vec<(String, usize)>,
    pub edges: Vec<(usize, usize, Vec<usize>)>,
}

pub fn to_label_cover(c: &MinorCondition) -> Result<LabelCover> {
    if !c.is_bipartite() {
        return Err(Error::Invalid(format!("condition {} is not bipartite", c.name)));
    }
    let mut u_map = BTreeMap::new();
    let mut v_map = BTreeMap::new();
    let mut u_vertices = Vec::new();
    let mut v_vertices = Vec::new();
    for (i, s) in c.symbols.iter().enumerate() {
        match s.side {
            Side::U => {
                u_map.insert(i, u_vertices.len());
                u_vertices.push((s.name.clone(), s.arity));
            }
            Side::V => {
                v_map.insert(i, v_vertices.len());
                v_vertices.push((s.name.clone(), s.arity));
            }
            Side::Unassigned => {
                return Err(Error::Invalid(format!("symbol {} has no side", s.name)));
            }
        }
    }
    let edges = c
        .identities
        .iter()
        .map(|id| (u_map[&id.lhs], v_map[&id.rhs], id.pi.clone()))
        .collect();
    Ok(LabelCover { name: c.name.clone(), u_vertices, v_vertices, edges })
}

pub fn from_label_cover(lc: &LabelCover) -> Result<MinorCondition> {
    let mut symbols = Vec::new();
    for (name, labels) in &lc.u_vertices {
        symbols.push(FunctionSymbol { name: name.clone(), arity: *labels, side: Side::U });
    }
    for (name, labels) in &lc.v_vertices {
        symbols.push(FunctionSymbol { name: name.clone(), arity: *labels, side: Side::V });
    }
    let off = lc.u_vertices.len();
    let identities = lc
        .edges
        .iter()
        .map(|(u, v, pi)| MinorIdentity { lhs: *u, rhs: off + *v, pi: pi.clone() })
        .collect();
    MinorCondition::new(lc.name.clone(), symbols, identities)
}

pub fn serialize_condition(c: &MinorCondition) -> String {
    let mut out = String::new();
    writeln!(out, "condition {}", c.name).unwrap();
    for s in &c.symbols {
        let side = match s.side {
            Side::U => "U",
            Side::V => "V",
            Side::Unassigned => "-",
        };
        writeln!(out, "symbol {} {} {}", s.name, side, s.arity).unwrap();
    }
    for id in &c.identities {
        let l = &c.symbols[id.lhs];
        let r = &c.symbols[id.rhs];
        let lhs_vars: Vec<String> = (1..=l.arity).map(|i| format!("x{}", i)).collect();
        let rhs_vars: Vec<String> = id.pi.iter().map(|&p| format!("x{}", p + 1)).collect();
        writeln!(
            out,
            "identity {}({}) = {}({})",
            l.name,
            lhs_vars.join(","),
            r.name,
            rhs_vars.join(",")
        )
        .unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

fn parse_application(text: &str, line: usize) -> Result<(String, Vec<String>)> {
    let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
    let open = text.find('(').ok_or_else(|| err("missing ("))?;
    let close = text.rfind(')').ok_or_else(|| err("missing )"))?;
    let name = text[..open].trim().to_string();
    let args = text[open + 1..close]
        .split(',')
        .map(|a| a.trim().to_string())
        .collect();
    Ok((name, args))
}

pub fn parse_condition(text: &str) -> Result<MinorCondition> {
    let mut name = None;
    let mut symbols: Vec<FunctionSymbol> = Vec::new();
    let mut identities = Vec::new();
    let mut saw_end = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if saw_end {
            return Err(err("content after end".into()));
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "condition" => {
                name = Some(
                    words
                        .get(1)
                        .ok_or_else(|| err("missing condition name".into()))?
                        .to_string(),
                )
            }
            "symbol" => {
                if words.len() != 4 {
                    return Err(err("symbol line needs: symbol <name> <U|V|-> <arity>".into()));
                }
                let side = match words[2] {
                    "U" => Side::U,
                    "V" => Side::V,
                    "-" => Side::Unassigned,
                    other => return Err(err(format!("bad side {:?}", other))),
                };
                let arity =
                    words[3].parse().map_err(|_| err(format!("bad arity {:?}", words[3])))?;
                symbols.push(FunctionSymbol { name: words[1].to_string(), arity, side });
            }
            "identity" => {
                let rest = line.strip_prefix("identity").unwrap().trim();
                let mut halves = rest.splitn(2, '=');
                let lhs_text = halves.next().unwrap();
                let rhs_text = halves.next().ok_or_else(|| err("missing =".into()))?;
                let (lname, lvars) = parse_application(lhs_text, line_no)?;
                let (rname, rvars) = parse_application(rhs_text, line_no)?;
                let lhs = symbols
                    .iter()
                    .position(|s| s.name == lname)
                    .ok_or_else(|| err(format!("unknown symbol {}", lname)))?;
                let rhs = symbols
                    .iter()
                    .position(|s| s.name == rname)
                    .ok_or_else(|| err(format!("unknown symbol {}", rname)))?;
                for (k, v) in lvars.iter().enumerate() {
                    if *v != format!("x{}", k + 1) {
                        return Err(err("left side variables must be x1..xn in order".into()));
                    }
                }
                if lvars.len() != symbols[lhs].arity {
                    return Err(err("left side arity mismatch".into()));
                }
                let pi = rvars
                    .iter()
                    .map(|v| {
                        v.strip_prefix('x')
                            .and_then(|s| s.parse::<usize>().ok())
                            .filter(|&i| i >= 1)
                            .map(|i| i - 1)
                            .ok_or_else(|| err(format!("bad variable {:?}", v)))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                identities.push(MinorIdentity { lhs, rhs, pi });
            }
            "end" => saw_end = true,
            other => return Err(err(format!("unknown directive {:?}", other))),
        }
    }
    if !saw_end {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing end".into() });
    }
    let name =
        name.ok_or_else(|| Error::Parse { line: 1, msg: "missing condition header".into() })?;
    MinorCondition::new(name, symbols, identities)
}

pub fn serialize_label_cover(lc: &LabelCover) -> String {
    let mut out = String::new();
    writeln!(out, "labelcover {}", lc.name).unwrap();
    for (name, labels) in &lc.u_vertices {
        writeln!(out, "uvertex {} {}", name, labels).unwrap();
    }
    for (name, labels) in &lc.v_vertices {
        writeln!(out, "vvertex {} {}", name, labels).unwrap();
    }
    for (u, v, pi) in &lc.edges {
        let words: Vec<String> = pi.iter().map(|p| (p + 1).to_string()).collect();
        writeln!(
            out,
            "edge {} {} {}",
            lc.u_vertices[*u].0,
            lc.v_vertices[*v].0,
            words.join(" ")
        )
        .unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

pub fn parse_label_cover(text: &str) -> Result<LabelCover> {
    let mut name = None;
    let mut u_vertices: Vec<(String, usize)> = Vec::new();
    let mut v_vertices: Vec<(String, usize)> = Vec::new();
    let mut edges = Vec::new();
    let mut saw_end = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if saw_end {
            return Err(err("content after end".into()));
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "labelcover" => {
                name = Some(
                    words.get(1).ok_or_else(|| err("missing name".into()))?.to_string(),
                )
            }
            "uvertex" | "vvertex" => {
                if words.len() != 3 {
                    return Err(err("vertex line needs: <kind> <name> <labels>".into()));
                }
                let labels =
                    words[2].parse().map_err(|_| err(format!("bad count {:?}", words[2])))?;
                let entry = (words[1].to_string(), labels);
                if words[0] == "uvertex" {
                    u_vertices.push(entry);
                } else {
                    v_vertices.push(entry);
                }
            }
            "edge" => {
                if words.len() < 3 {
                    return Err(err("edge line needs: edge <u> <v> <pi...>".into()));
                }
                let u = u_vertices
                    .iter()
                    .position(|(n, _)| n == words[1])
                    .ok_or_else(|| err(format!("unknown u-vertex {}", words[1])))?;
                let v = v_vertices
                    .iter()
                    .position(|(n, _)| n == words[2])
                    .ok_or_else(|| err(format!("unknown v-vertex {}", words[2])))?;
                let pi = words[3..]
                    .iter()
                    .map(|w| {
                        w.parse::<usize>()
                            .ok()
                            .filter(|&x| x >= 1 && x <= u_vertices[u].1)
                            .map(|x| x - 1)
                            .ok_or_else(|| err(format!("bad label {:?}", w)))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                if pi.len() != v_vertices[v].1 {
                    return Err(err("projection length must equal v-vertex labels".into()));
                }
                edges.push((u, v, pi));
            }
            "end" => saw_end = true,
            other => return Err(err(format!("unknown directive {:?}", other))),
        }
    }
    if !saw_end {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing end".into() });
    }
    let name =
        name.ok_or_else(|| Error::Parse { line: 1, msg: "missing labelcover header".into() })?;
    Ok(LabelCover { name, u_vertices, v_vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{clique, decode_tuple};
    use crate::minionlab::alternating_threshold;

    #[test]
    fn olsak_shape() {
        let c = generate_condition(ConditionKind::Olsak).unwrap();
        assert_eq!(c.symbols.len(), 2);
        assert_eq!(c.symbols[0].arity, 2);
        assert_eq!(c.symbols[1].arity, 6);
        assert_eq!(c.identities.len(), 3);
        assert!(c.is_bipartite());
        assert!(is_trivial(&c).is_none());
    }

    #[test]
    fn gloop_k3_is_siggers() {
        let c = generate_condition(ConditionKind::GLoop(&clique(3))).unwrap();
        let s = generate_condition(ConditionKind::Siggers).unwrap();
        let pis: Vec<&Vec<usize>> = c.identities.iter().map(|i| &i.pi).collect();
        let spis: Vec<&Vec<usize>> = s.identities.iter().map(|i| &i.pi).collect();
        assert_eq!(pis, spis);
    }

    #[test]
    fn trivial_cases() {
        // f(x,y) = g(y,x) is trivial: f -> coordinate 1, g -> coordinate 2.
        let c = MinorCondition::new(
            "t",
            vec![sym("f", Side::U, 2), sym("g", Side::V, 2)],
            vec![MinorIdentity { lhs: 0, rhs: 1, pi: vec![1, 0] }],
        )
        .unwrap();
        assert_eq!(is_trivial(&c), Some(vec![0, 1]));
        let e = generate_condition(ConditionKind::Example216).unwrap();
        assert!(is_trivial(&e).is_none());
    }

    #[test]
    fn robustness_values() {
        let e = generate_condition(ConditionKind::Example216).unwrap();
        let (frac, assign) = max_projection_fraction(&e);
        assert_eq!(frac, Ratio::new(3, 4));
        assert_eq!(satisfied_count(&e, &assign.iter().map(|&a| Some(a)).collect::<Vec<_>>()), 3);
        let o = generate_condition(ConditionKind::Olsak).unwrap();
        assert_eq!(max_projection_fraction(&o).0, Ratio::new(2, 3));
        // Any trivial condition has fraction 1.
        let c = MinorCondition::new(
            "t",
            vec![sym("f", Side::U, 2), sym("g", Side::V, 2)],
            vec![MinorIdentity { lhs: 0, rhs: 1, pi: vec![1, 0] }],
        )
        .unwrap();
        assert_eq!(max_projection_fraction(&c).0, Ratio::from_integer(1));
    }

    #[test]
    fn robustness_matches_brute_force() {
        // Independent oracle: plain product loop over all assignments.
        for c in [
            generate_condition(ConditionKind::Example216).unwrap(),
            generate_condition(ConditionKind::Olsak).unwrap(),
            generate_condition(ConditionKind::MajorityRobust(1)).unwrap(),
        ] {
            let arities: Vec<usize> = c.symbols.iter().map(|s| s.arity).collect();
            let mut best = 0;
            let total: usize = arities.iter().product();
            for code in 0..total {
                let mut assign = Vec::new();
                let mut rest = code;
                for &a in &arities {
                    assign.push(Some(rest % a));
                    rest /= a;
                }
                best = best.max(satisfied_count(&c, &assign));
            }
            assert_eq!(
                max_projection_fraction(&c).0,
                Ratio::new(best as u64, c.identities.len() as u64),
                "{}",
                c.name
            );
        }
    }

    #[test]
    fn majority_robust_shape() {
        let c = generate_condition(ConditionKind::MajorityRobust(1)).unwrap();
        assert_eq!(c.identities.len(), 3);
        assert_eq!(c.symbols[0].arity, 4); // x_0 plus one y per (set, coord)
        assert_eq!(c.symbols[1].arity, 3);
        assert_eq!(max_projection_fraction(&c).0, Ratio::new(2, 3));
        let c2 = generate_condition(ConditionKind::MajorityRobust(2)).unwrap();
        assert_eq!(c2.identities.len(), 27);
        assert_eq!(c2.symbols[1].arity, 9);
    }

    #[test]
    fn bipartize_symmetric() {
        let c = generate_condition(ConditionKind::Symmetric(2)).unwrap();
        assert!(!c.is_bipartite());
        let b = bipartize_height1(&c).unwrap();
        assert!(b.is_bipartite());
        assert_eq!(b.identities.len(), 2);
        assert_eq!(b.symbols.len(), 2);
        // Already-bipartite input is returned unchanged.
        let o = generate_condition(ConditionKind::Olsak).unwrap();
        assert_eq!(bipartize_height1(&o).unwrap(), o);
    }

    #[test]
    fn symmetric_condition_matches_full_permutation_check() {
        // A concrete table satisfies the transposition-generated condition
        // iff it is invariant under all permutations.
        let c = generate_condition(ConditionKind::Symmetric(3)).unwrap();
        for code in 0..256u32 {
            let f = FunctionTable::new(
                "f",
                2,
                2,
                3,
                (0..8).map(|i| ((code >> i) & 1) as usize).collect(),
            )
            .unwrap();
            let mut assignment = BTreeMap::new();
            assignment.insert("f".to_string(), f.clone());
            let by_condition = witness_satisfies(&c, &assignment).unwrap();
            let by_perms = (0..3).permutations(3).all(|p| {
                (0..8).all(|idx| {
                    let args = decode_tuple(idx, 2, 3);
                    let permuted: Vec<usize> = p.iter().map(|&i| args[i]).collect();
                    f.eval(&permuted) == f.values[idx]
                })
            });
            assert_eq!(by_condition, by_perms, "table {:?}", f.values);
        }
    }

    #[test]
    fn alternating_nontrivial_and_satisfied_by_threshold() {
        let c = generate_condition(ConditionKind::Alternating(3)).unwrap();
        assert!(is_trivial(&c).is_none());
        let a = alternating_threshold(3).unwrap();
        let cancel = minor_of(&a, &[0, 1, 1], 3).unwrap();
        let mut assignment = BTreeMap::new();
        assignment.insert("a".to_string(), a);
        assignment.insert("c".to_string(), cancel);
        assert!(witness_satisfies(&c, &assignment).unwrap());
    }

    #[test]
    fn totally_symmetric_shape() {
        let c = generate_condition(ConditionKind::TotallySymmetric(2)).unwrap();
        // Surjections [2]->[1]: 1; surjections [2]->[2]: 2.
        assert_eq!(c.identities.len(), 3);
        assert!(c.is_bipartite());
    }

    #[test]
    fn label_cover_roundtrip() {
        let c = generate_condition(ConditionKind::Example216).unwrap();
        let lc = to_label_cover(&c).unwrap();
        let back = from_label_cover(&lc).unwrap();
        assert_eq!(back.symbols, c.symbols);
        assert_eq!(back.identities, c.identities);
        let text = serialize_label_cover(&lc);
        assert_eq!(parse_label_cover(&text).unwrap(), lc);
        // Non-bipartite conditions are rejected.
        let s = generate_condition(ConditionKind::Symmetric(2)).unwrap();
        assert!(to_label_cover(&s).is_err());
    }

    #[test]
    fn condition_text_roundtrip() {
        for c in [
            generate_condition(ConditionKind::Olsak).unwrap(),
            generate_condition(ConditionKind::Siggers).unwrap(),
            generate_condition(ConditionKind::Symmetric(3)).unwrap(),
            generate_condition(ConditionKind::Alternating(3)).unwrap(),
        ] {
            let text = serialize_condition(&c);
            assert_eq!(parse_condition(&text).unwrap(), c);
        }
        assert!(parse_condition("condition x\nsymbol f U 2\nidentity f(x2,x1) = f(x1,x2)\nend\n").is_err());
    }

    #[test]
    fn cyclic_shape() {
        let c = generate_condition(ConditionKind::Cyclic(3)).unwrap();
        assert_eq!(c.identities[1].pi, vec![1, 2, 0]);
        assert!(is_trivial(&c).is_none());
        // Binary cyclic = symmetric binary; also nontrivial.
        let c2 = generate_condition(ConditionKind::Cyclic(2)).unwrap();
        assert!(is_trivial(&c2).is_none());
    }
}
