//! Sum- and product-preserving operations on the truncated models: the
//! total Steenrod square on mod-2 rings, Adams operations on K-theory
//! rings, and user-defined formal operations for sign experiments.
//!
//! An operation is stored by its generator images only; every value is
//! obtained through the unique ring-endomorphism extension, so additivity
//! and multiplicativity hold by construction.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ring::{Coefficients, ExtensionTable, GradedElement, RingSpec};
use crate::thom::{BundleDescriptor, SpaceModel, Theory};

/// A ring endomorphism given by generator images, with a display label.
#[derive(Debug, Clone)]
pub struct Operation {
    table: ExtensionTable,
    label: String,
}

impl Operation {
    pub fn ring(&self) -> &Arc<RingSpec> {
        self.table.source()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn images(&self) -> &[GradedElement] {
        self.table.images()
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement> {
        self.table.apply(a)
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Validates generator images against the ring's relations and builds the
/// operation. Errors carry the offending generator.
pub fn make_formal_operation(
    ring: &Arc<RingSpec>,
    images: Vec<GradedElement>,
    label: impl Into<String>,
) -> Result<Operation> {
    Ok(Operation {
        table: ExtensionTable::new(ring, ring, images)?,
        label: label.into(),
    })
}

/// Images supplied by generator name; generators not named map to
/// themselves.
pub fn make_formal_operation_named(
    ring: &Arc<RingSpec>,
    named: &[(&str, GradedElement)],
    label: impl Into<String>,
) -> Result<Operation> {
    let mut images: Vec<GradedElement> = (0..ring.generators().len())
        .map(|i| GradedElement::generator(ring, i))
        .collect();
    for (name, img) in named {
        let idx = ring
            .generator_index(name)
            .ok_or_else(|| Error::InvalidSpec(format!("no generator named `{name}`")))?;
        images[idx] = img.clone();
    }
    make_formal_operation(ring, images, label)
}

/// The total Steenrod square Sq = 1 + Sq^1 + Sq^2 + ... on a mod-2 ring
/// whose generators sit in degrees 1 and 2. On such a generator g the
/// unstable axioms force Sq(g) = g + g^2; the multiplicative extension
/// realizes the Cartan formula.
pub fn total_sq(ring: &Arc<RingSpec>) -> Result<Operation> {
    if ring.coefficients() != Coefficients::F2 {
        return Err(Error::TheoryMismatch(
            "the total Steenrod square needs F2 coefficients".into(),
        ));
    }
    for g in ring.generators() {
        if g.degree != 1 && g.degree != 2 {
            return Err(Error::UnsupportedGeneratorDegree {
                generator: g.name.clone(),
                degree: g.degree,
            });
        }
    }
    let images = (0..ring.generators().len())
        .map(|i| {
            let g = GradedElement::generator(ring, i);
            g.add(&g.pow(2)).expect("same ring")
        })
        .collect();
    make_formal_operation(ring, images, "Sq")
}

/// The Adams operation psi^k on a K-theory ring whose generators are
/// nilpotent line-class coordinates x_i = eta_i - 1: each x_i maps to
/// (1 + x_i)^k - 1, truncated.
///
/// k = 0 collapses the theory (psi^0(x) = 0) and is only accepted with
/// `allow_degenerate`; negative k would need Laurent inverses and is
/// rejected.
pub fn adams(ring: &Arc<RingSpec>, k: i64, allow_degenerate: bool) -> Result<Operation> {
    if k < 0 || (k == 0 && !allow_degenerate) {
        return Err(Error::UnsupportedK(k));
    }
    if ring.coefficients() != Coefficients::Integer {
        return Err(Error::TheoryMismatch(
            "Adams operations need integer coefficients".into(),
        ));
    }
    for g in ring.generators() {
        if g.degree != 0 {
            return Err(Error::TheoryMismatch(format!(
                "Adams operations act on degree-0 K-theory generators; `{}` has degree {}",
                g.name, g.degree
            )));
        }
    }
    let images = (0..ring.generators().len())
        .map(|i| {
            let g = GradedElement::generator(ring, i);
            let one = GradedElement::one(ring);
            // (1 + x)^k - 1 truncated; exponents above the truncation die.
            let mut power = GradedElement::one(ring);
            let base = one.add(&g).expect("same ring");
            for _ in 0..k {
                power = power.mul(&base).expect("same ring");
            }
            power.sub(&one).expect("same ring")
        })
        .collect();
    make_formal_operation(ring, images, format!("psi^{k}"))
}

/// Stable CLI identifier for an operation family: `sq` or `psi:K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Sq,
    Psi(i64),
}

impl OpKind {
    pub fn theory(&self) -> Theory {
        match self {
            OpKind::Sq => Theory::Mod2,
            OpKind::Psi(_) => Theory::KTheory,
        }
    }

    pub fn build(&self, ring: &Arc<RingSpec>, allow_degenerate: bool) -> Result<Operation> {
        match self {
            OpKind::Sq => total_sq(ring),
            OpKind::Psi(k) => adams(ring, *k, allow_degenerate),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpKind::Sq => write!(f, "sq"),
            OpKind::Psi(k) => write!(f, "psi:{k}"),
        }
    }
}

/// The total Stiefel-Whitney class of a sum of real line bundles over a
/// product of real projective spaces: the product of 1 + a_i over the
/// summands, a_i the degree-1 class of the factor carrying the i-th line.
pub fn total_sw(space: &SpaceModel, bundle: &BundleDescriptor) -> Result<GradedElement> {
    if space.theory() != Theory::Mod2 {
        return Err(Error::UnsupportedBundle(
            "Stiefel-Whitney classes are computed in the mod-2 theory".into(),
        ));
    }
    bundle.validate_over(space)?;
    let ring = space.ring();
    let mut w = GradedElement::one(ring);
    for &factor in bundle.summands() {
        let line_class = match space.factor_generator(factor) {
            Some(g) => GradedElement::one(ring).add(&g)?,
            // a line over a point factor is trivial: w = 1
            None => GradedElement::one(ring),
        };
        w = w.mul(&line_class)?;
    }
    Ok(w)
}

/// Binomial coefficient C(n, k) as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut out = BigInt::one();
    for i in 0..k.min(n - k) {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}
