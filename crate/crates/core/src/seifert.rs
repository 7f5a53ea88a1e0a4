//! Seifert matrices and the constructions that produce them.
//!
//! Entry `(i, j)` of a Seifert matrix is the linking number of basis cycle
//! `i` with the positive push-off of basis cycle `j`. Every matrix built here
//! passes through [`SeifertMatrix::new`], which checks that `V - V^T` has
//! determinant one.
//!
//! Sign convention: positive braids close to knots of negative signature, so
//! the right-handed trefoil has `σ = -2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{check_parameters, KnotExpr, ParseErrorKind};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("det(V - V^T) = {det}, expected 1")]
    NotUnimodular { det: BigInt },
    #[error("gcd({m}, |{n}|) != 1")]
    NotCoprime { m: i64, n: i64 },
    #[error("multiplicity {m} < 1")]
    BadMultiplicity { m: i64 },
    #[error("braid closure has {components} components, expected a knot")]
    NotAKnot { components: usize },
    #[error("generator σ{generator} never occurs, so the braided surface is disconnected")]
    DisconnectedSurface { generator: usize },
    #[error("malformed braid: {0}")]
    BadBraid(String),
    #[error("empty sum")]
    EmptySum,
}

fn param_error(kind: ParseErrorKind, m: i64, n: i64) -> SeifertError {
    match kind {
        ParseErrorKind::BadMultiplicity => SeifertError::BadMultiplicity { m },
        _ => SeifertError::NotCoprime { m, n },
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeifertMatrix {
    matrix: IntMatrix,
}

impl fmt::Debug for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seifert{:?}", self.matrix)
    }
}

impl SeifertMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self, SeifertError> {
        if !matrix.is_square() {
            return Err(SeifertError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let det = matrix.sub(&matrix.transpose()).det();
        if !det.is_one() {
            return Err(SeifertError::NotUnimodular { det });
        }
        Ok(Self { matrix })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, SeifertError> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// The Seifert matrix of the unknot's disk.
    pub fn empty() -> Self {
        Self {
            matrix: IntMatrix::zeros(0, 0),
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.matrix.get(i, j)
    }

    /// `V + V^T`
    pub fn symmetrized(&self) -> IntMatrix {
        self.matrix.add(&self.matrix.transpose())
    }

    /// `V - V^T`
    pub fn intersection_form(&self) -> IntMatrix {
        self.matrix.sub(&self.matrix.transpose())
    }

    /// Matrix for the simultaneously permuted basis: entry `(i, j)` of the
    /// result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            matrix: self.matrix.principal(perm),
        }
    }

    /// JSON dump: rows of decimal strings plus size and provenance.
    pub fn to_json(&self, provenance: &[Block]) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = (0..self.size())
            .map(|i| {
                serde_json::Value::Array(
                    self.matrix
                        .row(i)
                        .iter()
                        .map(|x| serde_json::Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "size": self.size(),
            "entries": entries,
            "provenance": provenance.iter().map(Block::to_json).collect::<Vec<_>>(),
        })
    }
}

/// A braid word on `strands` strands; letter `k > 0` is `σ_k`, `-k` its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self, SeifertError> {
        if strands < 1 {
            return Err(SeifertError::BadBraid("at least one strand required".into()));
        }
        if let Some(&bad) = letters
            .iter()
            .find(|&&l| l == 0 || l.unsigned_abs() as usize >= strands)
        {
            return Err(SeifertError::BadBraid(format!(
                "generator {bad} out of range for {strands} strands"
            )));
        }
        Ok(Self { strands, letters })
    }

    /// `(σ_1 σ_2 … σ_{m-1})^n`, whose closure is the `(m, n)` torus knot.
    pub fn torus(m: usize, n: usize) -> Self {
        let letters = (0..n).flat_map(|_| 1..m as i64).collect();
        Self { strands: m, letters }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let k = l.unsigned_abs() as usize;
            perm.swap(k - 1, k);
        }
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        cycles
    }
}

impl FromStr for BraidWord {
    type Err = SeifertError;

    /// `"3: 1 2 -1 2"`: strand count, colon, whitespace-separated letters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| SeifertError::BadBraid("expected `strands: letters`".into()))?;
        let strands = head
            .trim()
            .parse::<usize>()
            .map_err(|_| SeifertError::BadBraid(format!("bad strand count `{}`", head.trim())))?;
        let letters = tail
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| SeifertError::BadBraid(format!("bad letter `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// A homology cycle on the braided surface: the loop through two
/// consecutive bands of the same generator.
#[derive(Clone, Copy, Debug)]
struct BandCycle {
    generator: usize,
    start: usize,
    end: usize,
}

fn band_cycles(b: &BraidWord) -> Vec<BandCycle> {
    let mut last: Vec<Option<usize>> = vec![None; b.strands];
    let mut out = Vec::new();
    for (pos, &l) in b.letters.iter().enumerate() {
        let g = l.unsigned_abs() as usize;
        if let Some(prev) = last[g] {
            out.push(BandCycle {
                generator: g,
                start: prev,
                end: pos,
            });
        }
        last[g] = Some(pos);
    }
    out
}

fn sign(x: i64) -> i64 {
    x.signum()
}

/// Seifert matrix of the surface built from the braid closure with one disk
/// per strand and one half-twisted band per letter, on the given ordering of
/// band cycles.
fn braid_matrix(b: &BraidWord, cycles: &[BandCycle]) -> IntMatrix {
    let n = cycles.len();
    let mut v = IntMatrix::zeros(n, n);
    let w = &b.letters;
    for (i, a) in cycles.iter().enumerate() {
        let diag = -sign(sign(w[a.start]) + sign(w[a.end]));
        v.set(i, i, BigInt::from(diag));
    }
    for (i, a) in cycles.iter().enumerate() {
        for (j, c) in cycles.iter().enumerate() {
            if i == j || a.start > c.start {
                continue;
            }
            // a starts first
            let (ij, ji) = if a.end < c.start || a.end > c.end {
                (0, 0)
            } else if a.end == c.start {
                if w[c.start] > 0 {
                    (1, 0)
                } else {
                    (0, -1)
                }
            } else if a.generator == c.generator + 1 {
                (-1, 0)
            } else if c.generator == a.generator + 1 {
                (0, 1)
            } else {
                (0, 0)
            };
            v.set(i, j, BigInt::from(ij));
            v.set(j, i, BigInt::from(ji));
        }
    }
    v
}

fn check_braid_surface(b: &BraidWord) -> Result<(), SeifertError> {
    let components = b.closure_components();
    if components != 1 {
        return Err(SeifertError::NotAKnot { components });
    }
    let mut used = vec![false; b.strands];
    for &l in &b.letters {
        used[l.unsigned_abs() as usize] = true;
    }
    if let Some(g) = (1..b.strands).find(|&g| !used[g]) {
        return Err(SeifertError::DisconnectedSurface { generator: g });
    }
    Ok(())
}

/// Seifert matrix of the braided surface of a braid closure, basis ordered
/// by the position of each cycle's first band in the word.
pub fn braid_seifert(b: &BraidWord) -> Result<SeifertMatrix, SeifertError> {
    check_braid_surface(b)?;
    let cycles = band_cycles(b);
    SeifertMatrix::new(braid_matrix(b, &cycles))
}

/// Seifert matrix of the fiber surface of the `(m, n)` torus knot. For
/// `n < 0` this is the mirror of the `(m, -n)` matrix.
pub fn torus_seifert(m: i64, n: i64) -> Result<SeifertMatrix, SeifertError> {
    check_parameters(m, n).map_err(|k| param_error(k, m, n))?;
    if n < 0 {
        return Ok(mirror(&torus_seifert(m, -n)?));
    }
    if m == 1 || n == 1 {
        return Ok(SeifertMatrix::empty());
    }
    if m == 2 {
        let size = (n - 1) as usize;
        let mut v = IntMatrix::zeros(size, size);
        for i in 0..size {
            v.set(i, i, BigInt::from(-1));
            if i + 1 < size {
                v.set(i, i + 1, BigInt::one());
            }
        }
        return SeifertMatrix::new(v);
    }
    let b = BraidWord::torus(m as usize, n as usize);
    check_braid_surface(&b)?;
    let mut cycles = band_cycles(&b);
    // generator-major basis
    cycles.sort_by_key(|c| (c.generator, c.start));
    SeifertMatrix::new(braid_matrix(&b, &cycles))
}

/// Sign of the half-turn in the 1-handles joining adjacent parallel copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfTwist {
    Positive,
    Negative,
}

impl HalfTwist {
    pub fn of(n: i64) -> Self {
        if n < 0 {
            HalfTwist::Negative
        } else {
            HalfTwist::Positive
        }
    }
}

/// Number of independent cycles that run through joining handles: the cycle
/// rank of the graph with one vertex per copy and one edge per handle.
fn handle_cycle_rank(copies: usize, handles: &[(usize, usize, HalfTwist)]) -> usize {
    let mut parent: Vec<usize> = (0..copies).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut rank = 0;
    for &(a, b, _) in handles {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            rank += 1;
        } else {
            parent[ra] = rb;
        }
    }
    rank
}

/// Seifert matrix of `m` parallel copies of the surface of `v`, adjacent
/// copies joined by half-twisted 1-handles of the given sign. Copy `k + 1`
/// is the positive push-off of copy `k`, so block `(k, l)` is `V` for
/// `k <= l` and `V^T` for `k > l`.
pub fn parallel_copies_twisted(v: &SeifertMatrix, m: usize, twist: HalfTwist) -> SeifertMatrix {
    assert!(m >= 1, "at least one copy");
    let handles: Vec<(usize, usize, HalfTwist)> = (0..m.saturating_sub(1)).map(|k| (k, k + 1, twist)).collect();
    // The handles form a path, so no homology class crosses a handle and the
    // twist sign cannot enter the form.
    assert_eq!(handle_cycle_rank(m, &handles), 0);
    let g = v.size();
    let vt = v.matrix.transpose();
    let mut out = IntMatrix::zeros(m * g, m * g);
    for k in 0..m {
        for l in 0..m {
            let src = if k <= l { &v.matrix } else { &vt };
            for i in 0..g {
                for j in 0..g {
                    out.set(k * g + i, l * g + j, src.get(i, j).clone());
                }
            }
        }
    }
    SeifertMatrix::new(out).expect("parallel copies of a Seifert form are unimodular")
}

pub fn parallel_copies(v: &SeifertMatrix, m: usize) -> SeifertMatrix {
    parallel_copies_twisted(v, m, HalfTwist::Positive)
}

/// The `(m, n)`-cable of the knot with Seifert matrix `v`: the direct
/// Murasugi sum of `m` parallel copies with the `(m, n)` torus fiber, so
/// the off-diagonal blocks vanish.
pub fn cable(v: &SeifertMatrix, m: i64, n: i64) -> Result<SeifertMatrix, SeifertError> {
    check_parameters(m, n).map_err(|k| param_error(k, m, n))?;
    if m == 1 {
        return Ok(v.clone());
    }
    let copies = parallel_copies_twisted(v, m as usize, HalfTwist::of(n));
    let torus = torus_seifert(m, n)?;
    Ok(block_sum(&[copies, torus]))
}

fn block_sum(vs: &[SeifertMatrix]) -> SeifertMatrix {
    SeifertMatrix::new(IntMatrix::block_diag(vs.iter().map(|v| &v.matrix)))
        .expect("block sums of Seifert forms are unimodular")
}

pub fn connected_sum(vs: &[SeifertMatrix]) -> Result<SeifertMatrix, SeifertError> {
    if vs.is_empty() {
        return Err(SeifertError::EmptySum);
    }
    Ok(block_sum(vs))
}

/// Direct Murasugi sum. Cross pairings vanish, so the form is the block sum;
/// kept apart from [`connected_sum`] so that provenance can tell them apart.
pub fn plumb(vs: &[SeifertMatrix]) -> Result<SeifertMatrix, SeifertError> {
    if vs.is_empty() {
        return Err(SeifertError::EmptySum);
    }
    Ok(block_sum(vs))
}

/// `-V^T`
pub fn mirror(v: &SeifertMatrix) -> SeifertMatrix {
    SeifertMatrix {
        matrix: v.matrix.transpose().neg(),
    }
}

/// `V^T`
pub fn reverse(v: &SeifertMatrix) -> SeifertMatrix {
    SeifertMatrix {
        matrix: v.matrix.transpose(),
    }
}

/// `-V`, a Seifert matrix for the concordance inverse of an invertible knot.
pub fn negate(v: &SeifertMatrix) -> SeifertMatrix {
    SeifertMatrix { matrix: v.matrix.neg() }
}

/// A diagonal block of an evaluated expression and the AST path that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub path: String,
    pub offset: usize,
    pub size: usize,
}

impl Block {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "path": self.path, "offset": self.offset, "size": self.size })
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub matrix: SeifertMatrix,
    pub blocks: Vec<Block>,
}

fn join(prefix: &str, seg: &str) -> String {
    if prefix.is_empty() {
        seg.to_string()
    } else {
        format!("{prefix}/{seg}")
    }
}

fn leaf(path: String, matrix: SeifertMatrix) -> Construction {
    let blocks = if matrix.size() == 0 {
        Vec::new()
    } else {
        vec![Block {
            path,
            offset: 0,
            size: matrix.size(),
        }]
    };
    Construction { matrix, blocks }
}

fn concat(
    parts: Vec<Construction>,
    combine: fn(&[SeifertMatrix]) -> Result<SeifertMatrix, SeifertError>,
) -> Result<Construction, SeifertError> {
    let mut blocks = Vec::new();
    let mut offset = 0;
    let mut mats = Vec::with_capacity(parts.len());
    for p in parts {
        for mut b in p.blocks {
            b.offset += offset;
            blocks.push(b);
        }
        offset += p.matrix.size();
        mats.push(p.matrix);
    }
    Ok(Construction {
        matrix: combine(&mats)?,
        blocks,
    })
}

fn eval_at(e: &KnotExpr, path: &str) -> Result<Construction, SeifertError> {
    Ok(match e {
        KnotExpr::Unknot => leaf(join(path, "unknot"), SeifertMatrix::empty()),
        KnotExpr::Torus(m, n) => leaf(join(path, &format!("torus({m},{n})")), torus_seifert(*m, *n)?),
        KnotExpr::Cable(m, n, c) => {
            check_parameters(*m, *n).map_err(|k| param_error(k, *m, *n))?;
            let here = join(path, &format!("cable({m},{n})"));
            let companion = eval_at(c, &here)?;
            if *m == 1 {
                companion
            } else {
                let copies = leaf(
                    join(&here, "copies"),
                    parallel_copies_twisted(&companion.matrix, *m as usize, HalfTwist::of(*n)),
                );
                let torus = leaf(join(&here, &format!("torus({m},{n})")), torus_seifert(*m, *n)?);
                concat(vec![copies, torus], plumb)?
            }
        }
        KnotExpr::Mirror(x) => {
            let inner = eval_at(x, &join(path, "mirror"))?;
            Construction {
                matrix: mirror(&inner.matrix),
                blocks: inner.blocks,
            }
        }
        KnotExpr::Reverse(x) => {
            let inner = eval_at(x, &join(path, "reverse"))?;
            Construction {
                matrix: reverse(&inner.matrix),
                blocks: inner.blocks,
            }
        }
        KnotExpr::ConnSum(ps) => {
            let parts = ps
                .iter()
                .enumerate()
                .map(|(i, p)| eval_at(p, &join(path, &format!("sum[{i}]"))))
                .collect::<Result<Vec<_>, _>>()?;
            concat(parts, connected_sum)?
        }
        KnotExpr::Plumb(ps) => {
            let parts = ps
                .iter()
                .enumerate()
                .map(|(i, p)| eval_at(p, &join(path, &format!("plumb[{i}]"))))
                .collect::<Result<Vec<_>, _>>()?;
            concat(parts, plumb)?
        }
    })
}

/// Evaluates an expression together with the provenance of each diagonal
/// block.
pub fn construct(e: &KnotExpr) -> Result<Construction, SeifertError> {
    eval_at(e, "")
}

/// Seifert matrix of an expression; the unknot gives the empty matrix.
pub fn eval(e: &KnotExpr) -> Result<SeifertMatrix, SeifertError> {
    construct(e).map(|c| c.matrix)
}

/// The standard cable genus formula, independent of any matrix:
/// `g(K{m,n}) = m g(K) + (m-1)(|n|-1)/2`. Returns twice the genus, i.e. the
/// expected Seifert matrix size for fibered constructions.
pub fn expected_size(e: &KnotExpr) -> usize {
    match e {
        KnotExpr::Unknot => 0,
        KnotExpr::Torus(m, n) => ((m - 1) * (n.abs() - 1)) as usize,
        KnotExpr::Cable(m, n, c) => *m as usize * expected_size(c) + ((m - 1) * (n.abs() - 1)) as usize,
        KnotExpr::Mirror(x) | KnotExpr::Reverse(x) => expected_size(x),
        KnotExpr::ConnSum(ps) | KnotExpr::Plumb(ps) => ps.iter().map(expected_size).sum(),
    }
}

/// Search for a simultaneous permutation `P` with `P V P^T = W` by
/// backtracking over row patterns. Returns `perm` with
/// `V.permuted(perm) == W`. Gives up after `budget` search nodes.
pub fn find_permutation(v: &IntMatrix, w: &IntMatrix, budget: usize) -> Option<Vec<usize>> {
    let n = v.rows();
    if w.rows() != n {
        return None;
    }
    // cheap invariants per index: sorted row and column multisets
    let sig = |m: &IntMatrix, i: usize| {
        let mut r: Vec<BigInt> = m.row(i).to_vec();
        r.sort();
        let mut c: Vec<BigInt> = (0..n).map(|k| m.get(k, i).clone()).collect();
        c.sort();
        (m.get(i, i).clone(), r, c)
    };
    let sv: Vec<_> = (0..n).map(|i| sig(v, i)).collect();
    let sw: Vec<_> = (0..n).map(|i| sig(w, i)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut nodes = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        n: usize,
        v: &IntMatrix,
        w: &IntMatrix,
        sv: &[(BigInt, Vec<BigInt>, Vec<BigInt>)],
        sw: &[(BigInt, Vec<BigInt>, Vec<BigInt>)],
        perm: &mut [usize],
        used: &mut [bool],
        nodes: &mut usize,
        budget: usize,
    ) -> bool {
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sv[cand] != sw[k] {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            let consistent = (0..k).all(|j| v.get(cand, perm[j]) == w.get(k, j) && v.get(perm[j], cand) == w.get(j, k));
            if !consistent {
                continue;
            }
            perm[k] = cand;
            used[cand] = true;
            if go(k + 1, n, v, w, sv, sw, perm, used, nodes, budget) {
                return true;
            }
            used[cand] = false;
        }
        false
    }
    if go(0, n, v, w, &sv, &sw, &mut perm, &mut used, &mut nodes, budget) {
        Some(perm)
    } else {
        None
    }
}

/// True iff `gcd(m, |n|) = 1` and `m >= 1`.
pub fn coprime_params(m: i64, n: i64) -> bool {
    m >= 1 && m.gcd(&n.abs()) == 1
}

/// Whether every entry outside the given diagonal blocks is zero.
pub fn is_block_diagonal(v: &SeifertMatrix, sizes: &[usize]) -> bool {
    let n = v.size();
    if sizes.iter().sum::<usize>() != n {
        return false;
    }
    let mut owner = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        owner.extend(std::iter::repeat_n(b, s));
    }
    (0..n).all(|i| (0..n).all(|j| owner[i] == owner[j] || v.get(i, j).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> SeifertMatrix {
        SeifertMatrix::from_i64(&[&[-1, 1], &[0, -1]]).unwrap()
    }

    #[test]
    fn rejects_non_seifert_forms() {
        assert!(matches!(
            SeifertMatrix::from_i64(&[&[1, 0], &[0, 1]]),
            Err(SeifertError::NotUnimodular { .. })
        ));
        assert!(matches!(
            SeifertMatrix::from_i64(&[&[1]]),
            Err(SeifertError::NotUnimodular { .. })
        ));
        assert!(matches!(
            SeifertMatrix::new(IntMatrix::zeros(1, 2)),
            Err(SeifertError::NotSquare { .. })
        ));
    }

    #[test]
    fn torus_small_cases() {
        assert_eq!(torus_seifert(2, 1).unwrap().size(), 0);
        assert_eq!(torus_seifert(1, 0).unwrap().size(), 0);
        assert_eq!(torus_seifert(2, 3).unwrap(), trefoil());
        assert_eq!(torus_seifert(3, 5).unwrap().size(), 8);
        assert_eq!(torus_seifert(3, 2).unwrap().size(), 2);
        assert_eq!(torus_seifert(4, 6), Err(SeifertError::NotCoprime { m: 4, n: 6 }));
        assert_eq!(torus_seifert(0, 1), Err(SeifertError::BadMultiplicity { m: 0 }));
        assert_eq!(torus_seifert(2, -3).unwrap(), mirror(&trefoil()));
    }

    #[test]
    fn braid_closure_checks() {
        let b: BraidWord = "2: 1 1".parse().unwrap();
        assert_eq!(braid_seifert(&b), Err(SeifertError::NotAKnot { components: 2 }));
        let b: BraidWord = "3: 1 1 1".parse().unwrap();
        assert!(matches!(braid_seifert(&b), Err(SeifertError::NotAKnot { .. })));
        let b = BraidWord::new(3, vec![]).unwrap();
        assert!(matches!(braid_seifert(&b), Err(SeifertError::NotAKnot { .. })));
        assert!("3: 1 3".parse::<BraidWord>().is_err());
        assert!("3 1 2".parse::<BraidWord>().is_err());
        assert!("2: 0".parse::<BraidWord>().is_err());
        assert_eq!(braid_seifert(&"1:".parse().unwrap()).unwrap().size(), 0);
    }

    #[test]
    fn braid_small_cases() {
        let one: BraidWord = "2: 1".parse().unwrap();
        assert_eq!(braid_seifert(&one).unwrap().size(), 0);
        let three: BraidWord = "2: 1 1 1".parse().unwrap();
        assert_eq!(braid_seifert(&three).unwrap(), trefoil());
        for n in [3, 5, 7, 9, 15] {
            let b = BraidWord::torus(2, n);
            assert_eq!(braid_seifert(&b).unwrap(), torus_seifert(2, n as i64).unwrap());
        }
    }

    #[test]
    fn torus_basis_is_a_permutation_of_braid_basis() {
        for (m, n) in [(3, 4), (3, 5), (4, 5), (5, 3)] {
            let t = torus_seifert(m, n).unwrap();
            let b = braid_seifert(&BraidWord::torus(m as usize, n as usize)).unwrap();
            assert!(
                find_permutation(b.matrix(), t.matrix(), 1_000_000).is_some(),
                "({m},{n})"
            );
        }
    }

    #[test]
    fn parallel_copies_blocks() {
        let v = trefoil();
        assert_eq!(parallel_copies(&v, 1), v);
        assert_eq!(parallel_copies(&SeifertMatrix::empty(), 4).size(), 0);
        let w = parallel_copies(&v, 2);
        let vt = v.matrix().transpose();
        assert_eq!(w.matrix().block(0, 0, 2, 2), *v.matrix());
        assert_eq!(w.matrix().block(0, 2, 2, 2), *v.matrix());
        assert_eq!(w.matrix().block(2, 0, 2, 2), vt);
        assert_eq!(w.matrix().block(2, 2, 2, 2), *v.matrix());
        assert_eq!(
            parallel_copies_twisted(&v, 3, HalfTwist::Negative),
            parallel_copies_twisted(&v, 3, HalfTwist::Positive)
        );
    }

    #[test]
    fn handle_cycles_only_for_non_tree_joins() {
        let t = HalfTwist::Positive;
        assert_eq!(handle_cycle_rank(3, &[(0, 1, t), (1, 2, t)]), 0);
        assert_eq!(handle_cycle_rank(3, &[(0, 1, t), (1, 2, t), (2, 0, t)]), 1);
    }

    #[test]
    fn cable_cases() {
        let v = trefoil();
        assert_eq!(cable(&v, 1, 7).unwrap(), v);
        let c = cable(&SeifertMatrix::empty(), 2, 13).unwrap();
        assert_eq!(c, torus_seifert(2, 13).unwrap());
        let c = cable(&v, 2, 13).unwrap();
        assert_eq!(c.size(), 16);
        assert!(is_block_diagonal(&c, &[4, 12]));
        assert_eq!(cable(&v, 2, 4), Err(SeifertError::NotCoprime { m: 2, n: 4 }));
    }

    #[test]
    fn sums_mirror_reverse() {
        let v = trefoil();
        assert_eq!(connected_sum(std::slice::from_ref(&v)).unwrap(), v);
        assert_eq!(connected_sum(&[SeifertMatrix::empty(), v.clone()]).unwrap(), v);
        assert_eq!(
            plumb(&[SeifertMatrix::empty(), SeifertMatrix::empty()]).unwrap().size(),
            0
        );
        assert_eq!(connected_sum(&[]), Err(SeifertError::EmptySum));
        assert_eq!(mirror(&mirror(&v)), v);
        assert_eq!(reverse(&reverse(&v)), v);
        assert_eq!(reverse(&mirror(&v)), negate(&v));
        assert_eq!(mirror(&SeifertMatrix::empty()).size(), 0);
    }

    #[test]
    fn eval_sizes_and_provenance() {
        let lm = crate::expr::parse("LM").unwrap();
        let c = construct(&lm).unwrap();
        assert_eq!(c.matrix.size(), 60);
        assert_eq!(expected_size(&lm), 60);
        let sizes: Vec<usize> = c.blocks.iter().map(|b| b.size).collect();
        assert_eq!(sizes, vec![4, 12, 14, 4, 14, 12]);
        assert_eq!(c.blocks[0].path, "sum[0]/cable(2,13)/copies");
        assert_eq!(c.blocks[5].offset, 48);
        assert_eq!(eval(&KnotExpr::Unknot).unwrap().size(), 0);
        let k = crate::expr::parse("torus(2,13) # mirror(torus(2,13))").unwrap();
        let v = torus_seifert(2, 13).unwrap();
        assert_eq!(eval(&k).unwrap(), connected_sum(&[v.clone(), mirror(&v)]).unwrap());
    }

    #[test]
    fn permutation_search() {
        let v = torus_seifert(2, 7).unwrap();
        let rev: Vec<usize> = (0..6).rev().collect();
        let w = v.permuted(&rev);
        assert_eq!(w.matrix(), &v.matrix().transpose());
        let p = find_permutation(v.matrix(), w.matrix(), 10_000).unwrap();
        assert_eq!(v.permuted(&p), w);
        assert!(find_permutation(v.matrix(), mirror(&v).matrix(), 10_000).is_none());
    }
}
