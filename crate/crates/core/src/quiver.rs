//! Quivers, dimension vectors, potentials and representations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// Star-pairing of a doubled quiver: arrows `0..original` come from the
/// input quiver and `star[a]` is the reversed partner of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Doubling {
    pub original: usize,
    pub star: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub doubled_of: Option<Doubling>,
}

impl Quiver {
    /// Builds a quiver from vertex labels and `(id, source, target)` triples.
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Quiver> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            doubled_of: None,
        };
        for v in vertices {
            if q.vertex_index(v).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex {v}")));
            }
            q.vertices.push(v.to_string());
        }
        for &(id, s, t) in arrows {
            let source = q
                .vertex_index(s)
                .ok_or_else(|| Error::Invalid(format!("unknown vertex {s}")))?;
            let target = q
                .vertex_index(t)
                .ok_or_else(|| Error::Invalid(format!("unknown vertex {t}")))?;
            if q.arrow_index(id).is_some() {
                return Err(Error::Invalid(format!("duplicate arrow id {id}")));
            }
            q.arrows.push(Arrow {
                id: id.to_string(),
                source,
                target,
            });
        }
        Ok(q)
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_double(&self) -> bool {
        self.doubled_of.is_some()
    }

    /// `⟨v, w⟩ = Σ_i v_i w_i − Σ_{a: i→j} v_i w_j`.
    pub fn euler_form(&self, v: &DimensionVector, w: &DimensionVector) -> i64 {
        let diag: i64 = v.0.iter().zip(&w.0).map(|(&a, &b)| a as i64 * b as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|a| v.0[a.source] as i64 * w.0[a.target] as i64)
            .sum();
        diag - off
    }

    /// `dim Rep_v(Q) = Σ_a v_{s(a)} v_{t(a)}`.
    pub fn rep_dim(&self, v: &DimensionVector) -> u64 {
        self.arrows
            .iter()
            .map(|a| v.0[a.source] as u64 * v.0[a.target] as u64)
            .sum()
    }

    /// Canonical spec-file text.
    pub fn to_spec_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vertices: {}", self.vertices.join(", ")).unwrap();
        writeln!(out, "arrows:").unwrap();
        for a in &self.arrows {
            writeln!(out, "  {}: {}->{}", a.id, self.vertices[a.source], self.vertices[a.target]).unwrap();
        }
        out
    }

    /// Stable content hash used as a cache key.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.to_spec_text().as_bytes());
        if let Some(d) = &self.doubled_of {
            h.update(format!("{:?}", d.star).as_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Adds a reversed arrow `a*` for every arrow `a`.
pub fn double_quiver(q: &Quiver) -> Result<Quiver> {
    if q.is_double() {
        return Err(Error::AlreadyDoubled);
    }
    let n = q.arrows.len();
    let mut arrows = q.arrows.clone();
    for a in &q.arrows {
        arrows.push(Arrow {
            id: format!("{}*", a.id),
            source: a.target,
            target: a.source,
        });
    }
    let star = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
    Ok(Quiver {
        vertices: q.vertices.clone(),
        arrows,
        doubled_of: Some(Doubling { original: n, star }),
    })
}

/// Named quivers used throughout the tests and the CLI.
pub mod catalog {
    use super::Quiver;

    pub fn a1() -> Quiver {
        Quiver::new(&["1"], &[]).unwrap()
    }

    pub fn a2() -> Quiver {
        Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap()
    }

    pub fn jordan() -> Quiver {
        Quiver::new(&["1"], &[("x", "1", "1")]).unwrap()
    }

    pub fn kronecker() -> Quiver {
        Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap()
    }

    /// `g` loops at one vertex.
    pub fn loops(g: usize) -> Quiver {
        let ids: Vec<String> = (1..=g).map(|i| format!("x{i}")).collect();
        let arrows: Vec<(&str, &str, &str)> = ids.iter().map(|id| (id.as_str(), "1", "1")).collect();
        Quiver::new(&["1"], &arrows).unwrap()
    }

    /// Loop vertex `1` and framing vertex `2` with the edge pointing at the loop.
    pub fn calogero_moser() -> Quiver {
        Quiver::new(&["1", "2"], &[("x", "1", "1"), ("v", "2", "1")]).unwrap()
    }

    /// Oriented `n`-cycle on vertices `c0..c{n-1}` plus a framing vertex `f`
    /// with one arrow `f -> c0`.
    pub fn cyclic_framed(n: usize) -> Quiver {
        let mut verts: Vec<String> = vec!["f".into()];
        verts.extend((0..n).map(|i| format!("c{i}")));
        let mut arrows: Vec<(String, String, String)> = vec![("i".into(), "f".into(), "c0".into())];
        for i in 0..n {
            arrows.push((format!("a{i}"), format!("c{i}"), format!("c{}", (i + 1) % n)));
        }
        let vrefs: Vec<&str> = verts.iter().map(String::as_str).collect();
        let arefs: Vec<(&str, &str, &str)> = arrows
            .iter()
            .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
            .collect();
        Quiver::new(&vrefs, &arefs).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(pub Vec<u32>);

impl DimensionVector {
    pub fn new(v: Vec<u32>) -> Self {
        DimensionVector(v)
    }

    pub fn zero(rank: usize) -> Self {
        DimensionVector(vec![0; rank])
    }

    /// `|v| = Σ v_i`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `v·v = Σ v_i²`.
    pub fn dot_self(&self) -> u64 {
        self.0.iter().map(|&x| x as u64 * x as u64).sum()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        DimensionVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Parses `"1,1"` (positional) for a quiver with matching rank.
    pub fn parse_csv(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("bad dimension entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DimensionVector)
    }

    /// All nonzero dimension vectors of the given rank with `|v| <= cutoff`,
    /// ordered by total then lexicographically.
    pub fn all_up_to(rank: usize, cutoff: u32) -> Vec<DimensionVector> {
        let mut out = Vec::new();
        for total in 1..=cutoff {
            compositions(rank, total, &mut Vec::new(), &mut out);
        }
        out
    }
}

fn compositions(rank: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<DimensionVector>) {
    if prefix.len() + 1 == rank {
        prefix.push(total);
        out.push(DimensionVector(prefix.clone()));
        prefix.pop();
        return;
    }
    if rank == 0 {
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(rank, total - first, prefix, out);
        prefix.pop();
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PotentialTerm {
    /// Integer coefficient, reduced into the prime field at evaluation time.
    pub coeff: i64,
    /// Arrow indices of a closed path, stored at its least rotation.
    pub cycle: Vec<usize>,
}

/// A linear combination of oriented cycles, up to rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Potential {
    pub terms: Vec<PotentialTerm>,
}

fn least_rotation(word: &[usize]) -> Vec<usize> {
    (0..word.len().max(1))
        .map(|r| {
            let mut w = word[r.min(word.len())..].to_vec();
            w.extend_from_slice(&word[..r.min(word.len())]);
            w
        })
        .min()
        .unwrap_or_default()
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0)
    }

    /// Builds a potential from `(coefficient, arrow ids along the path)`.
    pub fn from_terms(q: &Quiver, terms: &[(i64, &[&str])]) -> Result<Potential> {
        let mut out = Potential::zero();
        for &(c, word) in terms {
            let idx = word
                .iter()
                .map(|id| {
                    q.arrow_index(id)
                        .ok_or_else(|| Error::Invalid(format!("unknown arrow {id}")))
                })
                .collect::<Result<Vec<_>>>()?;
            check_cycle(q, &idx).map_err(Error::Invalid)?;
            out.push(c, idx);
        }
        Ok(out)
    }

    fn push(&mut self, coeff: i64, cycle: Vec<usize>) {
        let cycle = least_rotation(&cycle);
        if let Some(t) = self.terms.iter_mut().find(|t| t.cycle == cycle) {
            t.coeff += coeff;
        } else {
            self.terms.push(PotentialTerm { coeff, cycle });
        }
    }

    pub fn to_expr(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let word: Vec<&str> = t.cycle.iter().map(|&a| q.arrows[a].id.as_str()).collect();
                format!("{} * {}", t.coeff, word.join("."))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The single loop `x` of the given arrow with coefficient 1.
    pub fn single_loop(q: &Quiver, id: &str) -> Result<Potential> {
        Potential::from_terms(q, &[(1, &[id])])
    }
}

fn check_cycle(q: &Quiver, word: &[usize]) -> std::result::Result<(), String> {
    if word.is_empty() {
        return Err("empty cycle".into());
    }
    for w in word.windows(2) {
        let (a, b) = (&q.arrows[w[0]], &q.arrows[w[1]]);
        if a.target != b.source {
            return Err(format!("arrow {} does not continue into {}", a.id, b.id));
        }
    }
    let (first, last) = (&q.arrows[word[0]], &q.arrows[word[word.len() - 1]]);
    if last.target != first.source {
        return Err(format!("path {}..{} is not closed", first.id, last.id));
    }
    Ok(())
}

/// Result of parsing a quiver spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverFile {
    pub quiver: Quiver,
    pub dim: Option<DimensionVector>,
    pub potential: Option<Potential>,
    pub named_potentials: BTreeMap<String, Potential>,
}

impl QuiverFile {
    /// Canonical serialization; `parse_quiver(x.to_text()) == x`.
    pub fn to_text(&self) -> String {
        let mut out = self.quiver.to_spec_text();
        if let Some(d) = &self.dim {
            let parts: Vec<String> = self
                .quiver
                .vertices
                .iter()
                .zip(&d.0)
                .map(|(v, n)| format!("{v}={n}"))
                .collect();
            writeln!(out, "dim: {}", parts.join(", ")).unwrap();
        }
        if let Some(p) = &self.potential {
            writeln!(out, "potential: {}", p.to_expr(&self.quiver)).unwrap();
        }
        for (name, p) in &self.named_potentials {
            writeln!(out, "potential {name}: {}", p.to_expr(&self.quiver)).unwrap();
        }
        out
    }

    /// Looks up a potential by name; `"default"` is the unnamed one.
    pub fn potential_named(&self, name: &str) -> Option<&Potential> {
        if name == "default" {
            self.potential.as_ref()
        } else {
            self.named_potentials.get(name)
        }
    }
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Column (1-based) of `needle` inside `line`, falling back to 1.
fn col_of(line: &str, needle: &str) -> usize {
    line.find(needle).map_or(1, |i| i + 1)
}

/// Parses the line-oriented quiver spec format.
///
/// ```text
/// vertices: a, b
/// arrows:
///   x: a->a
///   v: b->a
/// dim: a=2, b=1
/// potential: 2 * x.x + x
/// potential cubic: x.x.x
/// ```
///
/// `#` starts a comment. A single arrow may also follow `arrows:` inline.
pub fn parse_quiver(text: &str) -> Result<QuiverFile> {
    let mut vertices: Option<Vec<String>> = None;
    let mut arrows: Vec<(String, String, String, usize, usize)> = Vec::new();
    let mut dim_line: Option<(String, usize)> = None;
    let mut pot_lines: Vec<(Option<String>, String, usize)> = Vec::new();
    let mut in_arrows = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, rest)) = line.split_once(':') else {
            return Err(perr(lineno, 1, "expected `key: value`"));
        };
        let key_t = key.trim();
        match key_t {
            "vertices" => {
                in_arrows = false;
                if vertices.is_some() {
                    return Err(perr(lineno, 1, "vertices declared twice"));
                }
                let vs: Vec<String> = rest
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                for (i, v) in vs.iter().enumerate() {
                    if vs[..i].contains(v) {
                        return Err(perr(lineno, col_of(raw, v), format!("duplicate vertex {v}")));
                    }
                    if !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        return Err(perr(lineno, col_of(raw, v), format!("bad vertex label {v:?}")));
                    }
                }
                vertices = Some(vs);
            }
            "arrows" => {
                in_arrows = true;
                if !rest.trim().is_empty() {
                    arrows.push(parse_arrow_def(rest, raw, lineno)?);
                }
            }
            "dim" => {
                in_arrows = false;
                dim_line = Some((rest.to_string(), lineno));
            }
            k if k == "potential" || k.starts_with("potential ") => {
                in_arrows = false;
                let name = k.strip_prefix("potential").unwrap().trim();
                let name = (!name.is_empty()).then(|| name.to_string());
                pot_lines.push((name, rest.to_string(), lineno));
            }
            _ if in_arrows => arrows.push(parse_arrow_def(line, raw, lineno)?),
            _ => return Err(perr(lineno, col_of(raw, key_t), format!("unknown key {key_t:?}"))),
        }
    }

    let vertices = vertices.ok_or_else(|| perr(1, 1, "missing `vertices:` line"))?;
    let mut quiver = Quiver {
        vertices,
        arrows: Vec::new(),
        doubled_of: None,
    };
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (id, s, t, line, col) in arrows {
        if seen.contains_key(&id) {
            return Err(perr(line, col, format!("duplicate arrow id {id}")));
        }
        let source = quiver
            .vertex_index(&s)
            .ok_or_else(|| perr(line, col, format!("unknown vertex {s}")))?;
        let target = quiver
            .vertex_index(&t)
            .ok_or_else(|| perr(line, col, format!("unknown vertex {t}")))?;
        seen.insert(id.clone(), line);
        quiver.arrows.push(Arrow { id, source, target });
    }

    let dim = match dim_line {
        None => None,
        Some((rest, line)) => Some(parse_dim(&quiver, &rest, line)?),
    };

    let mut potential = None;
    let mut named_potentials = BTreeMap::new();
    for (name, expr, line) in pot_lines {
        let p = parse_potential(&quiver, &expr, line)?;
        match name {
            None if potential.is_some() => return Err(perr(line, 1, "potential declared twice")),
            None => potential = Some(p),
            Some(n) => {
                if named_potentials.insert(n.clone(), p).is_some() {
                    return Err(perr(line, 1, format!("potential {n} declared twice")));
                }
            }
        }
    }

    Ok(QuiverFile {
        quiver,
        dim,
        potential,
        named_potentials,
    })
}

fn parse_arrow_def(def: &str, raw: &str, line: usize) -> Result<(String, String, String, usize, usize)> {
    let col = col_of(raw, def.trim());
    let (id, ends) = def
        .split_once(':')
        .ok_or_else(|| perr(line, col, "expected `id: source->target`"))?;
    let (s, t) = ends
        .split_once("->")
        .ok_or_else(|| perr(line, col_of(raw, ends.trim()), "expected `source->target`"))?;
    let id = id.trim();
    if id.is_empty() || !id.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '*') {
        return Err(perr(line, col, format!("bad arrow id {id:?}")));
    }
    Ok((id.to_string(), s.trim().to_string(), t.trim().to_string(), line, col))
}

fn parse_dim(q: &Quiver, rest: &str, line: usize) -> Result<DimensionVector> {
    let mut v = vec![None; q.num_vertices()];
    for part in rest.split(',') {
        let part = part.trim();
        let (name, n) = part
            .split_once('=')
            .ok_or_else(|| perr(line, 1, format!("expected `vertex=n`, got {part:?}")))?;
        let idx = q
            .vertex_index(name.trim())
            .ok_or_else(|| perr(line, 1, format!("unknown vertex {}", name.trim())))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| perr(line, 1, format!("bad dimension {:?}", n.trim())))?;
        v[idx] = Some(n);
    }
    Ok(DimensionVector(v.into_iter().map(|x| x.unwrap_or(0)).collect()))
}

fn parse_potential(q: &Quiver, expr: &str, line: usize) -> Result<Potential> {
    let mut pot = Potential::zero();
    let normalized = expr.replace('-', "+ -");
    for term in normalized.split('+') {
        let term = term.trim();
        if term.is_empty() || term == "0" {
            continue;
        }
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b.trim()),
            None => (1, term),
        };
        let (coeff, word) = match body.split_once('*') {
            Some((c, w)) => {
                let c: i64 = c
                    .trim()
                    .parse()
                    .map_err(|_| perr(line, 1, format!("bad coefficient {:?}", c.trim())))?;
                (c, w.trim())
            }
            None => (1, body),
        };
        let idx = word
            .split('.')
            .map(|id| {
                q.arrow_index(id.trim())
                    .ok_or_else(|| perr(line, 1, format!("unknown arrow {:?} in cycle", id.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        check_cycle(q, &idx).map_err(|m| perr(line, 1, format!("malformed cycle {word}: {m}")))?;
        pot.push(sign * coeff, idx);
    }
    Ok(pot)
}

/// A representation of a quiver over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub quiver: Arc<Quiver>,
    pub field: Arc<FieldSpec>,
    pub dim: DimensionVector,
    /// One `v_{t(a)} × v_{s(a)}` matrix per arrow.
    pub mats: Vec<Matrix>,
}

impl Representation {
    pub fn new(
        quiver: Arc<Quiver>,
        field: Arc<FieldSpec>,
        dim: DimensionVector,
        mats: Vec<Matrix>,
    ) -> Result<Representation> {
        if dim.rank() != quiver.num_vertices() {
            return Err(Error::Shape(format!(
                "dimension vector has {} entries for {} vertices",
                dim.rank(),
                quiver.num_vertices()
            )));
        }
        if mats.len() != quiver.arrows.len() {
            return Err(Error::Shape(format!(
                "{} matrices for {} arrows",
                mats.len(),
                quiver.arrows.len()
            )));
        }
        for (a, m) in quiver.arrows.iter().zip(&mats) {
            let want = (dim.0[a.target] as usize, dim.0[a.source] as usize);
            if (m.rows, m.cols) != want {
                return Err(Error::Shape(format!(
                    "arrow {} needs {}x{}, got {}x{}",
                    a.id, want.0, want.1, m.rows, m.cols
                )));
            }
            if m.data.iter().any(|s| s.0 as u32 >= field.order()) {
                return Err(Error::Shape(format!("arrow {} has entries outside the field", a.id)));
            }
        }
        Ok(Representation {
            quiver,
            field,
            dim,
            mats,
        })
    }

    pub fn zero(quiver: Arc<Quiver>, field: Arc<FieldSpec>, dim: DimensionVector) -> Representation {
        let mats = quiver
            .arrows
            .iter()
            .map(|a| Matrix::zeros(dim.0[a.target] as usize, dim.0[a.source] as usize))
            .collect();
        Representation {
            quiver,
            field,
            dim,
            mats,
        }
    }

    pub fn mat(&self, id: &str) -> &Matrix {
        &self.mats[self.quiver.arrow_index(id).expect("known arrow")]
    }

    /// Image under a group element `g = (g_i)`: `M_a ↦ g_{t(a)} M_a g_{s(a)}^{-1}`.
    pub fn act(&self, g: &[Matrix], g_inv: &[Matrix]) -> Representation {
        let f = &self.field;
        let mats = self
            .quiver
            .arrows
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| g[a.target].mul(f, m).mul(f, &g_inv[a.source]))
            .collect();
        Representation {
            quiver: Arc::clone(&self.quiver),
            field: Arc::clone(&self.field),
            dim: self.dim.clone(),
            mats,
        }
    }

    /// Entry sequence in the fixed (arrow, row-major) order.
    pub fn entries(&self) -> Vec<u16> {
        self.mats.iter().flat_map(|m| m.data.iter().map(|s| s.0)).collect()
    }
}

/// `φ(x) = Σ c · Tr(M_{a_k} ⋯ M_{a_1})` for each cycle `a_1 … a_k`.
pub fn evaluate_potential(x: &Representation, phi: &Potential) -> Result<Scalar> {
    let f = &x.field;
    let mut acc = Scalar::ZERO;
    for term in &phi.terms {
        if term.cycle.iter().any(|&a| a >= x.mats.len()) {
            return Err(Error::Shape("potential references an arrow outside the quiver".into()));
        }
        let c = f.from_int(term.coeff);
        if c.is_zero() {
            continue;
        }
        let first = &x.quiver.arrows[term.cycle[0]];
        let n = x.dim.0[first.source] as usize;
        let mut prod = Matrix::identity(n);
        for &a in &term.cycle {
            let m = &x.mats[a];
            if m.cols != prod.rows {
                return Err(Error::Shape("cycle does not compose".into()));
            }
            prod = m.mul(f, &prod);
        }
        acc = f.add(acc, f.mul(c, prod.trace(f)));
    }
    Ok(acc)
}

/// Block-diagonal direct sum.
pub fn direct_sum(x: &Representation, y: &Representation) -> Result<Representation> {
    if x.quiver != y.quiver || x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    let mats = x.mats.iter().zip(&y.mats).map(|(a, b)| a.block_diag(b)).collect();
    Ok(Representation {
        quiver: Arc::clone(&x.quiver),
        field: Arc::clone(&x.field),
        dim: x.dim.add(&y.dim),
        mats,
    })
}
