//! Exact arithmetic in finitely presented graded-commutative rings.
//!
//! A ring is presented by an ordered list of generators, each either
//! polynomial with a truncation exponent T (relation g^{T+1} = 0) or
//! exterior (relation g^2 = 0), over exact integers or F2. Elements are
//! kept in a unique canonical form: a finite map from in-window monomials
//! to nonzero coefficients, with Koszul signs accumulated whenever a
//! product is normal-ordered back to the fixed generator order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default cap on the number of basis monomials of a ring.
pub const DEFAULT_BASIS_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integer,
    F2,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integer => write!(f, "Z"),
            Coefficients::F2 => write!(f, "F2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Relation g^{truncation + 1} = 0, truncation >= 1.
    Polynomial { truncation: u32 },
    /// Relation g^2 = 0.
    Exterior,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    pub kind: GeneratorKind,
}

impl GeneratorSpec {
    pub fn polynomial(name: impl Into<String>, degree: u32, truncation: u32) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
            kind: GeneratorKind::Polynomial { truncation },
        }
    }

    pub fn exterior(name: impl Into<String>, degree: u32) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
            kind: GeneratorKind::Exterior,
        }
    }

    /// Largest exponent a monomial may carry on this generator.
    pub fn exponent_bound(&self) -> u32 {
        match self.kind {
            GeneratorKind::Polynomial { truncation } => truncation,
            GeneratorKind::Exterior => 1,
        }
    }
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite presentation of a graded-commutative truncated ring.
///
/// The generator order is canonical: monomials are stored with exponents
/// aligned to it, and every product is normal-ordered back to it.
#[derive(Debug)]
pub struct RingSpec {
    coefficients: Coefficients,
    generators: Vec<GeneratorSpec>,
    odd: Vec<bool>,
    basis: Vec<Monomial>,
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.coefficients == other.coefficients && self.generators == other.generators
    }
}

impl Eq for RingSpec {}

impl RingSpec {
    pub fn new(coefficients: Coefficients, generators: Vec<GeneratorSpec>) -> Result<Arc<Self>> {
        Self::with_basis_cap(coefficients, generators, DEFAULT_BASIS_CAP)
    }

    pub fn with_basis_cap(
        coefficients: Coefficients,
        generators: Vec<GeneratorSpec>,
        cap: usize,
    ) -> Result<Arc<Self>> {
        for (i, g) in generators.iter().enumerate() {
            if !valid_identifier(&g.name) {
                return Err(Error::InvalidSpec(format!(
                    "generator name `{}` is not an identifier",
                    g.name
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidSpec(format!(
                    "duplicate generator name `{}`",
                    g.name
                )));
            }
            match g.kind {
                GeneratorKind::Polynomial { truncation } => {
                    if truncation < 1 {
                        return Err(Error::InvalidSpec(format!(
                            "truncation exponent of `{}` must be >= 1",
                            g.name
                        )));
                    }
                    if g.degree % 2 == 1 && coefficients == Coefficients::Integer {
                        return Err(Error::InvalidSpec(format!(
                            "odd-degree polynomial generator `{}` over integer coefficients",
                            g.name
                        )));
                    }
                }
                GeneratorKind::Exterior => {
                    if g.degree % 2 == 0 && coefficients == Coefficients::Integer {
                        return Err(Error::InvalidSpec(format!(
                            "even-degree exterior generator `{}` over integer coefficients",
                            g.name
                        )));
                    }
                }
            }
        }

        let mut size: u128 = 1;
        for g in &generators {
            size = size.saturating_mul(u128::from(g.exponent_bound()) + 1);
            if size > cap as u128 {
                return Err(Error::TooLarge { size, cap });
            }
        }

        let odd = generators.iter().map(|g| g.degree % 2 == 1).collect();
        let mut ring = RingSpec {
            coefficients,
            generators,
            odd,
            basis: Vec::new(),
        };
        ring.basis = ring.enumerate_basis();
        Ok(Arc::new(ring))
    }

    fn enumerate_basis(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one(self.generators.len())];
        for (i, g) in self.generators.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (g.exponent_bound() as usize + 1));
            for m in &out {
                for e in 0..=g.exponent_bound() {
                    let mut exps = m.exps.clone();
                    exps[i] = e;
                    next.push(Monomial { exps });
                }
            }
            out = next;
        }
        out.sort_by(|a, b| self.display_order(a, b));
        out
    }

    /// Canonical term order: total degree, then word length (exponent
    /// sum), then earlier generators first. Gives `1, x, x^2` in degree-0
    /// rings, `1 + a + b + a*b` and `a^2` before `a*b` in graded ones.
    pub fn display_order(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        let length = |m: &Monomial| m.exps.iter().sum::<u32>();
        self.monomial_degree(a)
            .cmp(&self.monomial_degree(b))
            .then_with(|| length(a).cmp(&length(b)))
            .then_with(|| b.exps.cmp(&a.exps))
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// All monomials respecting the truncation/exterior bounds, sorted by
    /// (total degree, exponent vector). This is the exhaustive-check domain.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.exps
            .iter()
            .zip(&self.generators)
            .map(|(&e, g)| e * g.degree)
            .sum()
    }

    /// Largest total degree of any basis monomial.
    pub fn top_degree(&self) -> u32 {
        self.generators
            .iter()
            .map(|g| g.exponent_bound() * g.degree)
            .sum()
    }

    pub fn in_window(&self, m: &Monomial) -> bool {
        m.exps.len() == self.generators.len()
            && m.exps
                .iter()
                .zip(&self.generators)
                .all(|(&e, g)| e <= g.exponent_bound())
    }

    /// Sign (-1)^t with t the number of odd-odd transpositions needed to
    /// normal-order the concatenation a.b back to generator order.
    pub fn product_sign(&self, a: &Monomial, b: &Monomial) -> i8 {
        if self.coefficients == Coefficients::F2 {
            return 1;
        }
        let mut swaps: u64 = 0;
        for (i, &ai) in a.exps.iter().enumerate() {
            if ai == 0 || !self.odd[i] {
                continue;
            }
            for (j, &bj) in b.exps.iter().enumerate().take(i) {
                if bj > 0 && self.odd[j] {
                    swaps += u64::from(ai) * u64::from(bj);
                }
            }
        }
        if swaps % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Monomial product with Koszul sign; `None` when a truncation or
    /// exterior relation kills the product.
    pub fn merge_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i8)> {
        let mut exps = Vec::with_capacity(a.exps.len());
        for (i, (&ai, &bi)) in a.exps.iter().zip(&b.exps).enumerate() {
            let e = ai + bi;
            if e > self.generators[i].exponent_bound() {
                return None;
            }
            exps.push(e);
        }
        Some((Monomial { exps }, self.product_sign(a, b)))
    }

    /// Presentation summary, e.g. `Z[x]/(x^4)` with generator degrees.
    pub fn describe(&self) -> String {
        if self.generators.is_empty() {
            return format!("{}", self.coefficients);
        }
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let relations: Vec<String> = self
            .generators
            .iter()
            .map(|g| match g.kind {
                GeneratorKind::Polynomial { truncation } => {
                    format!("{}^{}", g.name, truncation + 1)
                }
                GeneratorKind::Exterior => format!("{}^2", g.name),
            })
            .collect();
        let degrees: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("|{}| = {}", g.name, g.degree))
            .collect();
        format!(
            "{}[{}]/({}), {}",
            self.coefficients,
            names.join(", "),
            relations.join(", "),
            degrees.join(", ")
        )
    }
}

pub fn same_ring(a: &Arc<RingSpec>, b: &Arc<RingSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector aligned with the ring's generator list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(n_generators: usize) -> Self {
        Monomial {
            exps: vec![0; n_generators],
        }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

fn normalize_coeff(coefficients: Coefficients, c: BigInt) -> BigInt {
    match coefficients {
        Coefficients::Integer => c,
        Coefficients::F2 => {
            let two = BigInt::from(2);
            ((c % &two) + &two) % &two
        }
    }
}

/// An exact element of a [`RingSpec`] in canonical normal form: no zero
/// coefficients, every monomial inside the truncation window.
#[derive(Debug, Clone)]
pub struct GradedElement {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

impl GradedElement {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        GradedElement {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::scalar(ring, BigInt::one())
    }

    pub fn scalar(ring: &Arc<RingSpec>, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(Monomial::one(ring.generators().len()), c.into());
        out
    }

    pub fn generator(ring: &Arc<RingSpec>, index: usize) -> Self {
        let mut exps = vec![0; ring.generators().len()];
        exps[index] = 1;
        let mut out = Self::zero(ring);
        out.add_term(Monomial { exps }, BigInt::one());
        out
    }

    pub fn generator_by_name(ring: &Arc<RingSpec>, name: &str) -> Result<Self> {
        let idx = ring
            .generator_index(name)
            .ok_or_else(|| Error::InvalidSpec(format!("no generator named `{name}`")))?;
        Ok(Self::generator(ring, idx))
    }

    /// Builds an element from raw terms. Monomials outside the truncation
    /// window are zero in the quotient and are dropped.
    pub fn from_terms(
        ring: &Arc<RingSpec>,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self> {
        let n = ring.generators().len();
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            if m.exps.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "monomial has {} exponents, ring has {} generators",
                    m.exps.len(),
                    n
                )));
            }
            if ring.in_window(&m) {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let c = normalize_coeff(self.ring.coefficients(), c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = normalize_coeff(self.ring.coefficients(), o.get() + c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_unit() && c.is_one())
                .unwrap_or(false)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        if self.ring.coefficients() == Coefficients::F2 {
            return self.clone();
        }
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), c * d);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                if let Some((merged, sign)) = self.ring.merge_monomials(m, n) {
                    let mut coeff = c * d;
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    out.add_term(merged, coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..exp {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// The degree-k piece. Summing over all k returns the element.
    pub fn degree_part(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if self.ring.monomial_degree(m) == k {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| self.ring.monomial_degree(m))
            .max()
            .unwrap_or(0)
    }

    /// Degree of a homogeneous element; `None` for 0 or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| self.ring.monomial_degree(m));
        let first = degrees.next()?;
        if degrees.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The single (monomial, coefficient) pair if the element has exactly
    /// one term.
    pub fn as_single_term(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = &self.ring.generators()[i].name;
            if e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for GradedElement {
    /// Canonical text rendering: terms sorted by (total degree, exponent
    /// vector), e.g. `2 + x` and `1 + a + b + a*b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        ordered.sort_by(|(m, _), (n, _)| self.ring.display_order(m, n));
        for (i, (m, c)) in ordered.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = self.render_monomial(m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Extension of generator images to the whole ring, the shared engine
/// behind ring maps and operations: a monomial maps to the ordered
/// product of its generator images.
///
/// Construction checks that each image satisfies its generator's power
/// relation, which makes the extension well defined and additive.
/// Multiplicativity additionally needs the images to graded-commute; it
/// is automatic for the concrete theories (homogeneous images, or no
/// signs at all) and is verified exhaustively by the operation-axioms
/// check wherever it is claimed.
#[derive(Debug, Clone)]
pub struct ExtensionTable {
    source: Arc<RingSpec>,
    target: Arc<RingSpec>,
    images: Vec<GradedElement>,
    // powers[i][e] = images[i]^e for e up to the generator's exponent bound
    powers: Vec<Vec<GradedElement>>,
}

impl ExtensionTable {
    pub fn new(
        source: &Arc<RingSpec>,
        target: &Arc<RingSpec>,
        images: Vec<GradedElement>,
    ) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::InvalidSpec(format!(
                "{} images supplied for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if !same_ring(img.ring(), target) {
                return Err(Error::RingMismatch);
            }
            let bound = g.exponent_bound();
            let relation_power = img.pow(bound + 1);
            if !relation_power.is_zero() {
                let relation = match g.kind {
                    GeneratorKind::Polynomial { truncation } => {
                        format!("image^{} = {} != 0", truncation + 1, relation_power)
                    }
                    GeneratorKind::Exterior => format!("image^2 = {relation_power} != 0"),
                };
                return Err(Error::RelationViolation {
                    generator: g.name.clone(),
                    detail: relation,
                });
            }
        }
        let powers = source
            .generators()
            .iter()
            .zip(&images)
            .map(|(g, img)| {
                let mut ps = Vec::with_capacity(g.exponent_bound() as usize + 1);
                ps.push(GradedElement::one(target));
                for e in 1..=g.exponent_bound() {
                    let prev = &ps[(e - 1) as usize];
                    ps.push(prev.mul(img).expect("same ring"));
                }
                ps
            })
            .collect();
        Ok(ExtensionTable {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
            powers,
        })
    }

    pub fn source(&self) -> &Arc<RingSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingSpec> {
        &self.target
    }

    pub fn images(&self) -> &[GradedElement] {
        &self.images
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement> {
        if !same_ring(a.ring(), &self.source) {
            return Err(Error::RingMismatch);
        }
        let mut out = GradedElement::zero(&self.target);
        for (m, c) in a.terms() {
            let mut acc = GradedElement::scalar(&self.target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&self.powers[i][e as usize])?;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

/// A ring map determined by generator images; the unique sum- and
/// product-preserving extension. Houses restriction and pullback maps.
#[derive(Debug, Clone)]
pub struct RingMap {
    table: ExtensionTable,
}

impl RingMap {
    pub fn new(
        source: &Arc<RingSpec>,
        target: &Arc<RingSpec>,
        images: Vec<GradedElement>,
    ) -> Result<Self> {
        Ok(RingMap {
            table: ExtensionTable::new(source, target, images)?,
        })
    }

    /// Images supplied by generator name; unnamed generators map to 0.
    pub fn from_named_images(
        source: &Arc<RingSpec>,
        target: &Arc<RingSpec>,
        named: &[(&str, GradedElement)],
    ) -> Result<Self> {
        let mut images = vec![GradedElement::zero(target); source.generators().len()];
        for (name, img) in named {
            let idx = source
                .generator_index(name)
                .ok_or_else(|| Error::InvalidSpec(format!("no generator named `{name}`")))?;
            images[idx] = img.clone();
        }
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<RingSpec> {
        self.table.source()
    }

    pub fn target(&self) -> &Arc<RingSpec> {
        self.table.target()
    }

    pub fn images(&self) -> &[GradedElement] {
        self.table.images()
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement> {
        self.table.apply(a)
    }

    /// Composition g(f(-)); defined when f's target is g's source.
    pub fn compose(g: &RingMap, f: &RingMap) -> Result<RingMap> {
        if !same_ring(f.target(), g.source()) {
            return Err(Error::RingMismatch);
        }
        let images = f
            .images()
            .iter()
            .map(|img| g.apply(img))
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(f.source(), g.target(), images)
    }
}

/// Tensor-style external product: concatenated generator lists, with the
/// cross product a x b = embed_left(a) * embed_right(b).
///
/// Clashing generator names are disambiguated with suffixes 1 (left) and
/// 2 (right).
pub fn external_product_ring(
    left: &Arc<RingSpec>,
    right: &Arc<RingSpec>,
) -> Result<(Arc<RingSpec>, RingMap, RingMap)> {
    external_product_ring_with_cap(left, right, DEFAULT_BASIS_CAP)
}

pub fn external_product_ring_with_cap(
    left: &Arc<RingSpec>,
    right: &Arc<RingSpec>,
    cap: usize,
) -> Result<(Arc<RingSpec>, RingMap, RingMap)> {
    if left.coefficients() != right.coefficients() {
        return Err(Error::CoefficientMismatch);
    }
    let clash: Vec<&str> = left
        .generators()
        .iter()
        .map(|g| g.name.as_str())
        .filter(|n| right.generator_index(n).is_some())
        .collect();
    let rename = |g: &GeneratorSpec, suffix: &str| -> GeneratorSpec {
        let mut g = g.clone();
        if clash.contains(&g.name.as_str()) {
            g.name = format!("{}{}", g.name, suffix);
        }
        g
    };
    let mut generators: Vec<GeneratorSpec> =
        left.generators().iter().map(|g| rename(g, "1")).collect();
    generators.extend(right.generators().iter().map(|g| rename(g, "2")));
    let product = RingSpec::with_basis_cap(left.coefficients(), generators, cap)?;

    let n_left = left.generators().len();
    let left_images = (0..n_left)
        .map(|i| GradedElement::generator(&product, i))
        .collect();
    let right_images = (0..right.generators().len())
        .map(|i| GradedElement::generator(&product, n_left + i))
        .collect();
    let embed_left = RingMap::new(left, &product, left_images)?;
    let embed_right = RingMap::new(right, &product, right_images)?;
    Ok((product, embed_left, embed_right))
}

/// a x b in a product ring obtained from [`external_product_ring`].
pub fn cross(
    embed_left: &RingMap,
    embed_right: &RingMap,
    a: &GradedElement,
    b: &GradedElement,
) -> Result<GradedElement> {
    embed_left.apply(a)?.mul(&embed_right.apply(b)?)
}
