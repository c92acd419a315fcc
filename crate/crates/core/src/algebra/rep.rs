//! Commutative Q-algebras: graded-truncated polynomial quotients and
//! finite-dimensional structure-constant algebras.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::poly::{parse_poly, Poly};
use crate::error::{JetError, Result};
use crate::exactcore::{solve, EchelonBuilder, ExactMatrix, QuotientSpace, Rational, SparseVec, Subspace};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    FiniteDimensional,
    GradedTruncated,
}

/// How an algebra is presented.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Presentation {
    /// `Q[generators] / (relations)` with homogeneous relations, kept up to `truncation`.
    Graded { generators: Vec<String>, relations: Vec<String>, truncation: usize },
    /// Basis names (the first is `1`), products `b*c = <linear combination>`, and an
    /// optional explicit generating set (empty means "choose greedily").
    StructureConstants { basis: Vec<String>, products: Vec<String>, generators: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub presentation: Presentation,
    pub assert_smooth: bool,
}

impl AlgebraSpec {
    pub fn graded(generators: &[&str], relations: &[&str], truncation: usize) -> Self {
        AlgebraSpec {
            presentation: Presentation::Graded {
                generators: generators.iter().map(|s| s.to_string()).collect(),
                relations: relations.iter().map(|s| s.to_string()).collect(),
                truncation,
            },
            assert_smooth: false,
        }
    }

    pub fn polynomial(generators: &[&str], truncation: usize) -> Self {
        Self::graded(generators, &[], truncation)
    }

    pub fn structure_constants(basis: &[&str], products: &[&str]) -> Self {
        AlgebraSpec {
            presentation: Presentation::StructureConstants {
                basis: basis.iter().map(|s| s.to_string()).collect(),
                products: products.iter().map(|s| s.to_string()).collect(),
                generators: Vec::new(),
            },
            assert_smooth: false,
        }
    }

    /// Same presentation with a different truncation window (graded case only).
    pub fn with_truncation(&self, t: usize) -> Self {
        let mut out = self.clone();
        if let Presentation::Graded { truncation, .. } = &mut out.presentation {
            *truncation = t;
        }
        out
    }
}

/// A word in the algebra generators, stored as a tree: `gen * parent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    /// `None` for the empty word (the unit).
    pub gen: Option<usize>,
    pub parent: usize,
    pub degree: usize,
}

#[derive(Debug)]
pub struct AlgebraRep {
    id: u64,
    kind: AlgebraKind,
    spec: AlgebraSpec,
    generator_names: Vec<String>,
    /// Global basis index of each algebra generator.
    gens: Vec<usize>,
    basis_names: Vec<Vec<String>>,
    /// Exponent vectors of the standard monomials (graded case).
    monomials: Vec<Vec<Vec<u32>>>,
    offsets: Vec<usize>,
    locate: Vec<(usize, usize)>,
    /// `mult[i][j]`: product of global basis elements, in local coordinates of the
    /// degree `deg i + deg j`; `None` when that degree is outside the window.
    mult: Vec<Vec<Option<SparseVec>>>,
    words: Vec<Word>,
    /// Each basis element as a combination of words.
    basis_words: Vec<SparseVec>,
    smooth: bool,
    relation_polys: Vec<Poly>,
    variable_names: Vec<String>,
    /// Per-degree normal-form data (graded case): all monomials and the relation quotient.
    nf_monos: Vec<Vec<Vec<u32>>>,
    nf_quot: Vec<QuotientSpace>,
}

impl AlgebraRep {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn is_graded(&self) -> bool {
        self.kind == AlgebraKind::GradedTruncated
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// Number of stored internal degrees (`truncation + 1`, or 1 when finite-dimensional).
    pub fn ndeg(&self) -> usize {
        self.basis_names.len()
    }

    pub fn top(&self) -> usize {
        self.ndeg() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis_names.iter().map(|b| b.len()).collect()
    }

    pub fn dim(&self, g: usize) -> usize {
        self.basis_names.get(g).map_or(0, |b| b.len())
    }

    pub fn total_dim(&self) -> usize {
        self.locate.len()
    }

    pub fn unit(&self) -> usize {
        0
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn gen_basis(&self, i: usize) -> usize {
        self.gens[i]
    }

    pub fn gen_degree(&self, i: usize) -> usize {
        self.locate[self.gens[i]].0
    }

    pub fn global(&self, deg: usize, local: usize) -> usize {
        self.offsets[deg] + local
    }

    pub fn locate(&self, b: usize) -> (usize, usize) {
        self.locate[b]
    }

    pub fn degree_of(&self, b: usize) -> usize {
        self.locate[b].0
    }

    pub fn basis_name(&self, b: usize) -> &str {
        let (d, l) = self.locate[b];
        &self.basis_names[d][l]
    }

    pub fn monomial(&self, b: usize) -> Option<&[u32]> {
        let (d, l) = self.locate[b];
        self.monomials.get(d).and_then(|m| m.get(l)).map(|v| v.as_slice())
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relation_polys
    }

    /// Product of two global basis elements, or `None` if out of window.
    pub fn mul_basis(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.mult[i][j].as_ref()
    }

    /// Product of homogeneous elements given in local coordinates.
    pub fn mul(&self, d1: usize, v1: &SparseVec, d2: usize, v2: &SparseVec) -> Option<SparseVec> {
        if d1 + d2 > self.top() {
            return None;
        }
        let mut pairs = Vec::new();
        for (i, a) in v1.iter() {
            for (j, b) in v2.iter() {
                let p = self.mult[self.global(d1, i)][self.global(d2, j)].as_ref().unwrap();
                let ab = a * b;
                for (k, c) in p.iter() {
                    pairs.push((k, &ab * c));
                }
            }
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn basis_words(&self, b: usize) -> &SparseVec {
        &self.basis_words[b]
    }

    /// Global basis elements of a degree.
    pub fn basis_range(&self, g: usize) -> std::ops::Range<usize> {
        self.offsets[g]..self.offsets[g] + self.dim(g)
    }

    /// Normal form of a monomial (graded case), or `None` if its degree is out of window.
    pub fn normal_form(&self, e: &[u32]) -> Option<(usize, SparseVec)> {
        let d: u32 = e.iter().sum();
        let d = d as usize;
        if d > self.top() || !self.is_graded() {
            return None;
        }
        let j = self.nf_monos[d].iter().position(|m| m.as_slice() == e)?;
        Some((d, self.nf_quot[d].project(&SparseVec::unit(j))))
    }

    /// Parses an algebra element written in the variables (graded case) or in the
    /// basis names (finite-dimensional case), split into homogeneous components.
    pub fn parse_element(&self, src: &str) -> Result<Vec<(usize, SparseVec)>> {
        let p = parse_poly(src, &self.variable_names, 1, 0)?;
        let mut by_deg: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (e, c) in &p.terms {
            if self.is_graded() {
                let (d, v) = self.normal_form(e).ok_or(JetError::TruncationTooSmall(format!(
                    "element {src:?} has a term beyond the truncation window"
                )))?;
                by_deg.entry(d).or_default().extend(v.iter().map(|(k, x)| (k, x * c)));
            } else {
                let deg: u32 = e.iter().sum();
                let idx = match deg {
                    0 => 0,
                    1 => e.iter().position(|&k| k == 1).unwrap() + 1,
                    _ => {
                        return Err(JetError::ValidationError(format!(
                            "element {src:?} must be linear in the basis names"
                        )))
                    }
                };
                by_deg.entry(0).or_default().push((idx, c.clone()));
            }
        }
        Ok(by_deg
            .into_iter()
            .map(|(d, pairs)| (d, SparseVec::from_pairs(pairs)))
            .filter(|(_, v)| !v.is_zero())
            .collect())
    }

    /// A stable content description used for cache keys and report metadata.
    pub fn fingerprint(&self) -> String {
        serde_json::to_string(&self.spec).expect("spec serializes")
    }

    /// Checks commutativity, associativity on all in-window triples, and the unit law.
    pub fn verify(&self) -> Result<()> {
        let n = self.total_dim();
        for i in 0..n {
            let (di, li) = self.locate[i];
            let u = self.mult[0][i].as_ref().unwrap();
            if *u != SparseVec::unit(li) || self.degree_of(0) != 0 || di > self.top() {
                return Err(JetError::InconsistentPresentation(format!("unit law fails on {}", self.basis_name(i))));
            }
            for j in 0..n {
                if self.mult[i][j] != self.mult[j][i] {
                    return Err(JetError::InconsistentPresentation(format!(
                        "product {}*{} is not commutative",
                        self.basis_name(i),
                        self.basis_name(j)
                    )));
                }
            }
        }
        for i in 0..n {
            let di = self.degree_of(i);
            for j in i..n {
                let dj = self.degree_of(j);
                let Some(ij) = &self.mult[i][j] else { continue };
                for k in j..n {
                    let dk = self.degree_of(k);
                    if di + dj + dk > self.top() {
                        continue;
                    }
                    let jk = self.mult[j][k].as_ref().unwrap();
                    let left = self.mul(di + dj, ij, dk, &SparseVec::unit(self.locate[k].1)).unwrap();
                    let right = self.mul(di, &SparseVec::unit(self.locate[i].1), dj + dk, jk).unwrap();
                    if left != right {
                        return Err(JetError::InconsistentPresentation(format!(
                            "associativity fails on ({}, {}, {})",
                            self.basis_name(i),
                            self.basis_name(j),
                            self.basis_name(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds an algebra from its presentation and verifies its tables.
pub fn build_algebra(spec: &AlgebraSpec) -> Result<std::sync::Arc<AlgebraRep>> {
    let rep = match &spec.presentation {
        Presentation::Graded { generators, relations, truncation } => build_graded(spec, generators, relations, *truncation)?,
        Presentation::StructureConstants { basis, products, generators } => build_fd(spec, basis, products, generators)?,
    };
    rep.verify()?;
    Ok(std::sync::Arc::new(rep))
}

/// Exponent vectors of total degree `d` in `v` variables, lexicographically descending.
pub fn monomials_of_degree(v: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(v: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == v {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(v, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if v == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(v, d, &mut Vec::new(), &mut out);
    out
}

fn monomial_name(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn build_graded(spec: &AlgebraSpec, names: &[String], relations: &[String], t: usize) -> Result<AlgebraRep> {
    let v = names.len();
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(JetError::ValidationError(format!("duplicate generator {n:?}")));
        }
    }
    let mut polys = Vec::new();
    for (k, r) in relations.iter().enumerate() {
        let p = parse_poly(r, names, k + 1, 0)?;
        if p.is_zero() {
            continue;
        }
        if !p.is_homogeneous() {
            return Err(JetError::InconsistentPresentation(format!(
                "relation {r:?} is not homogeneous; enter inhomogeneous quotients as structure constants"
            )));
        }
        if p.degrees()[0] == 0 {
            return Err(JetError::InconsistentPresentation(format!("relation {r:?} reduces to 1 = 0")));
        }
        polys.push(p);
    }

    // per-degree monomials, relation spans and normal forms
    let mut all_monos: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut quotients: Vec<QuotientSpace> = Vec::new();
    for d in 0..=t as u32 {
        let monos = monomials_of_degree(v, d);
        let index: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = EchelonBuilder::new(monos.len());
        for p in &polys {
            let e = p.degrees()[0];
            if e > d {
                continue;
            }
            for m in monomials_of_degree(v, d - e) {
                let pairs: Vec<(usize, Rational)> = p
                    .terms
                    .iter()
                    .map(|(pe, c)| {
                        let prod: Vec<u32> = pe.iter().zip(&m).map(|(a, b)| a + b).collect();
                        (index[&prod], c.clone())
                    })
                    .collect();
                span.insert(&SparseVec::from_pairs(pairs));
            }
        }
        quotients.push(QuotientSpace::new(span.finish()));
        all_monos.push(monos);
    }

    let mut basis_names = Vec::new();
    let mut monomials = Vec::new();
    let mut offsets = Vec::new();
    let mut locate = Vec::new();
    let mut std_index: HashMap<Vec<u32>, usize> = HashMap::new();
    for d in 0..=t {
        offsets.push(locate.len());
        let q = &quotients[d];
        let free: Vec<usize> = (0..all_monos[d].len()).filter(|&j| !q.sub().pivots().contains(&(j as u32))).collect();
        let ms: Vec<Vec<u32>> = free.iter().map(|&j| all_monos[d][j].clone()).collect();
        for (l, m) in ms.iter().enumerate() {
            std_index.insert(m.clone(), locate.len());
            locate.push((d, l));
        }
        basis_names.push(ms.iter().map(|m| monomial_name(m, names)).collect::<Vec<_>>());
        monomials.push(ms);
    }
    if locate.is_empty() || basis_names[0].is_empty() {
        return Err(JetError::InconsistentPresentation("the relations force 1 = 0".into()));
    }

    let mono_index: Vec<HashMap<&Vec<u32>, usize>> =
        all_monos.iter().map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect()).collect();
    let nf = |e: &Vec<u32>| -> SparseVec {
        let d: u32 = e.iter().sum();
        let d = d as usize;
        quotients[d].project(&SparseVec::unit(mono_index[d][e]))
    };

    let n = locate.len();
    let mut mult = vec![vec![None; n]; n];
    for i in 0..n {
        let (di, li) = locate[i];
        for j in 0..n {
            let (dj, lj) = locate[j];
            if di + dj > t {
                continue;
            }
            let e: Vec<u32> = monomials[di][li].iter().zip(&monomials[dj][lj]).map(|(a, b)| a + b).collect();
            mult[i][j] = Some(nf(&e));
        }
    }

    // generators: the variables that survive as standard monomials in degree 1
    let mut gens = Vec::new();
    let mut generator_names = Vec::new();
    let mut gen_of_var = vec![None; v];
    for (i, name) in names.iter().enumerate() {
        let mut e = vec![0; v];
        e[i] = 1;
        if let Some(&b) = std_index.get(&e) {
            gen_of_var[i] = Some(gens.len());
            gens.push(b);
            generator_names.push(name.clone());
        }
    }

    // words: every standard monomial is x_i times a standard monomial
    let mut words = Vec::with_capacity(n);
    for b in 0..n {
        let (d, l) = locate[b];
        let e = &monomials[d][l];
        match e.iter().position(|&k| k > 0) {
            None => words.push(Word { gen: None, parent: 0, degree: 0 }),
            Some(i) => {
                let mut pe = e.clone();
                pe[i] -= 1;
                let parent = std_index[&pe];
                let g = gen_of_var[i].expect("variables dividing a standard monomial are standard");
                words.push(Word { gen: Some(g), parent, degree: d });
            }
        }
    }
    let basis_words = (0..n).map(SparseVec::unit).collect();

    Ok(AlgebraRep {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        kind: AlgebraKind::GradedTruncated,
        spec: spec.clone(),
        generator_names,
        gens,
        basis_names,
        monomials,
        offsets,
        locate,
        mult,
        words,
        basis_words,
        smooth: polys.is_empty() || spec.assert_smooth,
        relation_polys: polys,
        variable_names: names.to_vec(),
        nf_monos: all_monos,
        nf_quot: quotients,
    })
}

fn build_fd(spec: &AlgebraSpec, basis: &[String], products: &[String], explicit_gens: &[String]) -> Result<AlgebraRep> {
    if basis.first().map(|s| s.as_str()) != Some("1") {
        return Err(JetError::ValidationError("the first basis element must be 1".into()));
    }
    let n = basis.len();
    let others: Vec<String> = basis[1..].to_vec();
    let index_of = |name: &str| basis.iter().position(|b| b == name);
    let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (line, prod) in products.iter().enumerate() {
        let line = line + 1;
        let (lhs, rhs) = prod.split_once('=').ok_or_else(|| JetError::ParseError {
            line,
            column: 1,
            message: format!("product {prod:?} lacks '='"),
        })?;
        let factors: Vec<&str> = lhs.split('*').map(|s| s.trim()).collect();
        if factors.len() != 2 {
            return Err(JetError::ParseError { line, column: 1, message: format!("left side {lhs:?} must be b*c") });
        }
        let (Some(i), Some(j)) = (index_of(factors[0]), index_of(factors[1])) else {
            return Err(JetError::ParseError { line, column: 1, message: format!("unknown basis element in {lhs:?}") });
        };
        let p = parse_poly(rhs, &others, line, lhs.len() + 1)?;
        let mut pairs = Vec::new();
        for (e, c) in &p.terms {
            let deg: u32 = e.iter().sum();
            match deg {
                0 => pairs.push((0, c.clone())),
                1 => pairs.push((e.iter().position(|&k| k == 1).unwrap() + 1, c.clone())),
                _ => {
                    return Err(JetError::ParseError {
                        line,
                        column: lhs.len() + 2,
                        message: "right side must be a linear combination of basis elements".into(),
                    })
                }
            }
        }
        let v = SparseVec::from_pairs(pairs);
        let key = (i.min(j), i.max(j));
        if let Some(old) = table.get(&key) {
            if *old != v {
                return Err(JetError::InconsistentPresentation(format!("conflicting products for {lhs:?}")));
            }
        }
        if i == 0 || j == 0 {
            let other = if i == 0 { j } else { i };
            if v != SparseVec::unit(other) {
                return Err(JetError::InconsistentPresentation(format!("1 must act as the identity in {prod:?}")));
            }
        }
        table.insert(key, v);
    }
    let mut mult = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = if i == 0 {
                SparseVec::unit(j)
            } else if j == 0 {
                SparseVec::unit(i)
            } else {
                match table.get(&(i.min(j), i.max(j))) {
                    Some(v) => v.clone(),
                    None => {
                        return Err(JetError::ValidationError(format!(
                            "missing product {}*{} in structure constants",
                            basis[i], basis[j]
                        )))
                    }
                }
            };
            mult[i][j] = Some(v);
        }
    }

    let value_of_word = |gen_vals: &SparseVec, gen: usize| -> SparseVec {
        let mut pairs = Vec::new();
        for (k, a) in gen_vals.iter() {
            for (m, c) in mult[gen][k].as_ref().unwrap().iter() {
                pairs.push((m, a * c));
            }
        }
        SparseVec::from_pairs(pairs)
    };
    // words generated by a candidate generating set, breadth first
    let grow = |gens: &[usize]| -> (Vec<Word>, Vec<SparseVec>, Subspace) {
        let mut words = vec![Word { gen: None, parent: 0, degree: 0 }];
        let mut values = vec![SparseVec::unit(0)];
        let mut span = EchelonBuilder::new(n);
        span.insert(&values[0]);
        let mut k = 0;
        while k < words.len() && !span.is_full() {
            for (gi, &g) in gens.iter().enumerate() {
                let val = value_of_word(&values[k], g);
                if span.insert(&val) {
                    words.push(Word { gen: Some(gi), parent: k, degree: 0 });
                    values.push(val);
                }
            }
            k += 1;
        }
        (words, values, span.finish())
    };

    let gens: Vec<usize> = if explicit_gens.is_empty() {
        let mut gens: Vec<usize> = Vec::new();
        for b in 1..n {
            let (_, _, span) = grow(&gens);
            if span.is_full() {
                break;
            }
            if !span.contains(&SparseVec::unit(b)) {
                gens.push(b);
            }
        }
        gens
    } else {
        explicit_gens
            .iter()
            .map(|g| index_of(g).ok_or_else(|| JetError::ValidationError(format!("unknown generator {g:?}"))))
            .collect::<Result<_>>()?
    };
    let (words, values, span) = grow(&gens);
    if !span.is_full() {
        return Err(JetError::ValidationError("the listed generators do not generate the algebra".into()));
    }
    let w = ExactMatrix::from_columns(n, &values);
    let inv = solve(&w, &ExactMatrix::identity(n)).expect("word values form a basis");
    let basis_words = inv.columns();

    Ok(AlgebraRep {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        kind: AlgebraKind::FiniteDimensional,
        spec: spec.clone(),
        generator_names: gens.iter().map(|&g| basis[g].clone()).collect(),
        gens,
        basis_names: vec![basis.to_vec()],
        monomials: Vec::new(),
        offsets: vec![0],
        locate: (0..n).map(|i| (0, i)).collect(),
        mult,
        words,
        basis_words,
        smooth: spec.assert_smooth,
        relation_polys: Vec::new(),
        variable_names: basis[1..].to_vec(),
        nf_monos: Vec::new(),
        nf_quot: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_dims() {
        let a = build_algebra(&AlgebraSpec::polynomial(&["x"], 3)).unwrap();
        assert_eq!(a.dims(), vec![1, 1, 1, 1]);
        assert!(a.is_smooth());
        let b = build_algebra(&AlgebraSpec::graded(&["x", "y"], &["x^2 + y^2"], 4)).unwrap();
        assert_eq!(b.dims(), vec![1, 2, 2, 2, 2]);
        assert!(!b.is_smooth());
    }

    #[test]
    fn dual_numbers() {
        let a = build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap();
        assert_eq!(a.dims(), vec![2]);
        assert!(a.mul_basis(1, 1).unwrap().is_zero());
        assert_eq!(a.generator_names(), &["e".to_string()]);
    }

    #[test]
    fn rejects_bad_presentations() {
        assert!(matches!(
            build_algebra(&AlgebraSpec::graded(&["x"], &["x^2 - 1"], 3)),
            Err(JetError::InconsistentPresentation(_))
        ));
        assert!(matches!(
            build_algebra(&AlgebraSpec::structure_constants(&["1", "e", "f"], &["e*e = 0", "f*f = 0"])),
            Err(JetError::ValidationError(_))
        ));
        assert!(matches!(
            build_algebra(&AlgebraSpec::structure_constants(&["1", "e", "f"], &["e*e = f", "e*f = e", "f*f = 0"])),
            Err(JetError::InconsistentPresentation(_))
        ));
    }

    #[test]
    fn truncated_cubic_has_one_generator() {
        let a = build_algebra(&AlgebraSpec::structure_constants(
            &["1", "x", "x2"],
            &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"],
        ))
        .unwrap();
        assert_eq!(a.ngens(), 1);
        assert_eq!(a.words().len(), 3);
    }
}
