//! Finite Thom-space models for sums of tautological line bundles over
//! products of projective spaces, and the two independent routes to the
//! twisting class rho_alpha(xi):
//!
//! * the division oracle: alpha(u) = rho * u solved for the unique rho in
//!   the base truncation window;
//! * the splitting-principle closed form, a product of per-line classes.
//!
//! Infinite projective spaces are replaced by user-chosen truncations;
//! the stability checks in the verifier justify the replacement.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ops::{OpKind, Operation};
use crate::ring::{
    external_product_ring, Coefficients, GeneratorSpec, GradedElement, Monomial, RingMap, RingSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    Mod2,
    KTheory,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theory::Mod2 => write!(f, "mod2"),
            Theory::KTheory => write!(f, "ktheory"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    RP,
    CP,
}

/// One projective-space factor RP(n) or CP(n), n >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorKind,
    pub n: u32,
}

impl Factor {
    pub fn new(kind: FactorKind, n: u32) -> Self {
        Factor { kind, n }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::RP => write!(f, "RP({})", self.n),
            FactorKind::CP => write!(f, "CP({})", self.n),
        }
    }
}

const RP_NAMES: &[&str] = &["a", "b", "c", "d", "e", "f", "g", "h"];
const CP_MOD2_NAMES: &[&str] = &["y", "z", "w", "v"];

/// Generator names for the factors of a model: `x`/`x1..xn` in K-theory;
/// `a, b, ...` for RP factors and `y, z, ...` for CP factors mod 2.
fn factor_names(factors: &[Factor], theory: Theory) -> Result<Vec<String>> {
    match theory {
        Theory::KTheory => {
            if factors.len() == 1 {
                Ok(vec!["x".to_string()])
            } else {
                Ok((1..=factors.len()).map(|i| format!("x{i}")).collect())
            }
        }
        Theory::Mod2 => {
            let mut rp_seen = 0;
            let mut cp_seen = 0;
            factors
                .iter()
                .map(|f| match f.kind {
                    FactorKind::RP => {
                        let name = RP_NAMES.get(rp_seen).ok_or_else(|| {
                            Error::InvalidSpec("too many RP factors to name".into())
                        })?;
                        rp_seen += 1;
                        Ok((*name).to_string())
                    }
                    FactorKind::CP => {
                        let name = CP_MOD2_NAMES.get(cp_seen).ok_or_else(|| {
                            Error::InvalidSpec("too many CP factors to name".into())
                        })?;
                        cp_seen += 1;
                        Ok((*name).to_string())
                    }
                })
                .collect()
        }
    }
}

fn factor_generator_spec(factor: &Factor, theory: Theory, name: &str, bound: u32) -> GeneratorSpec {
    let degree = match (theory, factor.kind) {
        (Theory::KTheory, _) => 0,
        (Theory::Mod2, FactorKind::RP) => 1,
        (Theory::Mod2, FactorKind::CP) => 2,
    };
    GeneratorSpec::polynomial(name, degree, bound)
}

/// Builds the model ring for the factors with each factor's truncation
/// raised by `bumps[i]`; factors whose resulting bound is 0 contribute no
/// generator. Returns the ring and the generator index of each factor.
fn model_ring(
    factors: &[Factor],
    theory: Theory,
    bumps: &[u32],
) -> Result<(Arc<RingSpec>, Vec<Option<usize>>)> {
    let names = factor_names(factors, theory)?;
    let coefficients = match theory {
        Theory::Mod2 => Coefficients::F2,
        Theory::KTheory => Coefficients::Integer,
    };
    let mut generators = Vec::new();
    let mut gen_of_factor = Vec::with_capacity(factors.len());
    for (i, factor) in factors.iter().enumerate() {
        let bound = factor.n + bumps[i];
        if bound == 0 {
            gen_of_factor.push(None);
        } else {
            gen_of_factor.push(Some(generators.len()));
            generators.push(factor_generator_spec(factor, theory, &names[i], bound));
        }
    }
    let ring = RingSpec::new(coefficients, generators)?;
    Ok((ring, gen_of_factor))
}

/// A finite stand-in for a product of projective spaces in one of the two
/// theories: its cohomology/K-theory ring and the class of each factor.
#[derive(Debug, Clone)]
pub struct SpaceModel {
    factors: Vec<Factor>,
    theory: Theory,
    ring: Arc<RingSpec>,
    gen_of_factor: Vec<Option<usize>>,
}

impl SpaceModel {
    pub fn new(factors: Vec<Factor>, theory: Theory) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("a space needs at least one factor".into()));
        }
        if theory == Theory::KTheory {
            if let Some(f) = factors.iter().find(|f| f.kind == FactorKind::RP) {
                return Err(Error::TheoryMismatch(format!(
                    "{f} is not a K-theory factor; K-theory models use CP factors only"
                )));
            }
        }
        let bumps = vec![0; factors.len()];
        let (ring, gen_of_factor) = model_ring(&factors, theory, &bumps)?;
        Ok(SpaceModel {
            factors,
            theory,
            ring,
            gen_of_factor,
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    /// The tautological class of factor `i`: the degree-1/2 generator mod
    /// 2, or x_i = eta_i - 1 in K-theory. `None` over a point factor.
    pub fn factor_generator(&self, i: usize) -> Option<GradedElement> {
        let idx = (*self.gen_of_factor.get(i)?)?;
        Some(GradedElement::generator(&self.ring, idx))
    }

    pub fn generator_index(&self, i: usize) -> Option<usize> {
        *self.gen_of_factor.get(i)?
    }
}

impl fmt::Display for SpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A sum of tautological line bundles in splitting normal form: each
/// summand references the factor it is pulled back from (0-based).
/// Summand order is preserved as given; the class computations do not
/// depend on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDescriptor {
    summands: Vec<usize>,
}

impl BundleDescriptor {
    pub fn new(summands: Vec<usize>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::UnsupportedBundle("a bundle needs at least one summand".into()));
        }
        Ok(BundleDescriptor { summands })
    }

    pub fn summands(&self) -> &[usize] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Concatenation, modelling the Whitney sum.
    pub fn sum(&self, other: &BundleDescriptor) -> BundleDescriptor {
        let mut summands = self.summands.clone();
        summands.extend_from_slice(&other.summands);
        BundleDescriptor { summands }
    }

    /// Checks every referenced factor exists and can carry a tautological
    /// line in the space's theory (real lines over RP factors mod 2,
    /// complex lines over CP factors in K-theory).
    pub fn validate_over(&self, space: &SpaceModel) -> Result<()> {
        for &i in &self.summands {
            let factor = space
                .factors()
                .get(i)
                .ok_or(Error::UnknownFactor(i + 1))?;
            match (space.theory(), factor.kind) {
                (Theory::Mod2, FactorKind::RP) | (Theory::KTheory, FactorKind::CP) => {}
                (Theory::Mod2, FactorKind::CP) => {
                    return Err(Error::UnsupportedBundle(format!(
                        "L{} lies over a CP factor; mod-2 line bundles are real lines over RP factors",
                        i + 1
                    )));
                }
                (Theory::KTheory, FactorKind::RP) => {
                    return Err(Error::TheoryMismatch(format!(
                        "L{} lies over an RP factor, which has no K-theory model here",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn multiplicity_per_factor(&self, n_factors: usize) -> Vec<u32> {
        let mut counts = vec![0u32; n_factors];
        for &i in &self.summands {
            counts[i] += 1;
        }
        counts
    }
}

impl fmt::Display for BundleDescriptor {
    /// Consecutive repeats group as `k*Li`, e.g. `2*L1 + L2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.summands.len() {
            let factor = self.summands[i];
            let mut count = 1;
            while i + count < self.summands.len() && self.summands[i + count] == factor {
                count += 1;
            }
            if count == 1 {
                parts.push(format!("L{}", factor + 1));
            } else {
                parts.push(format!("{}*L{}", count, factor + 1));
            }
            i += count;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An enlarged ring modelling the Thom space, with the distinguished Thom
/// class u and the window embedding of the base ring.
///
/// The base embeds monomial-for-monomial: each base generator appears in
/// the extended ring under the same name with the truncation raised by
/// the number of bundle summands on its factor, so that multiplication by
/// u is injective on the span of the base window.
#[derive(Debug, Clone)]
pub struct ThomData {
    base: Arc<RingSpec>,
    extended: Arc<RingSpec>,
    u: GradedElement,
    u_monomial: Monomial,
    degree_of_u: u32,
    base_to_ext: Vec<usize>,
    label: String,
    model: Option<ModelInfo>,
}

/// Provenance of Thom data built from a space model, kept so external
/// products can stay in model naming.
#[derive(Debug, Clone)]
struct ModelInfo {
    space: SpaceModel,
    bundle: BundleDescriptor,
    ext_gen_of_factor: Vec<Option<usize>>,
}

impl ThomData {
    /// Assembles Thom data from explicit parts, for formal instances. The
    /// Thom class must be a single monomial with coefficient 1, and every
    /// base generator must reappear in the extended ring (same name, same
    /// degree, same relative order, at least the same exponent bound).
    pub fn from_parts(
        base: &Arc<RingSpec>,
        extended: &Arc<RingSpec>,
        u: GradedElement,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !crate::ring::same_ring(u.ring(), extended) {
            return Err(Error::RingMismatch);
        }
        let (u_monomial, coeff) = u
            .as_single_term()
            .ok_or_else(|| Error::UnsupportedBundle(format!(
                "Thom class must be a single monomial, got {u}"
            )))?;
        if !coeff.is_one() {
            return Err(Error::UnsupportedBundle(format!(
                "Thom class must have coefficient 1, got {u}"
            )));
        }
        let u_monomial = u_monomial.clone();

        let mut base_to_ext = Vec::with_capacity(base.generators().len());
        for g in base.generators() {
            let idx = extended.generator_index(&g.name).ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "base generator `{}` is missing from the extended ring",
                    g.name
                ))
            })?;
            let h = &extended.generators()[idx];
            if h.degree != g.degree || h.exponent_bound() < g.exponent_bound() {
                return Err(Error::InvalidSpec(format!(
                    "extended generator `{}` does not extend the base generator",
                    g.name
                )));
            }
            if let Some(&prev) = base_to_ext.last() {
                if idx <= prev {
                    return Err(Error::InvalidSpec(
                        "base generators must keep their relative order in the extended ring"
                            .into(),
                    ));
                }
            }
            base_to_ext.push(idx);
        }

        let degree_of_u = extended.monomial_degree(&u_monomial);
        let td = ThomData {
            base: Arc::clone(base),
            extended: Arc::clone(extended),
            u,
            u_monomial,
            degree_of_u,
            base_to_ext,
            label: label.into(),
            model: None,
        };

        // Injectivity of a |-> a*u on the base span: each basis monomial
        // must survive multiplication by u. Distinctness is automatic for
        // monomial images.
        for m in base.basis() {
            if td.lift_monomial(m).is_none() {
                return Err(Error::InvalidSpec(format!(
                    "multiplication by the Thom class kills the base monomial with exponents {:?}",
                    m.exponents()
                )));
            }
        }
        Ok(td)
    }

    pub fn base(&self) -> &Arc<RingSpec> {
        &self.base
    }

    pub fn extended(&self) -> &Arc<RingSpec> {
        &self.extended
    }

    pub fn thom_class(&self) -> &GradedElement {
        &self.u
    }

    pub fn degree_of_u(&self) -> u32 {
        self.degree_of_u
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn lift_exponents(&self, m: &Monomial) -> Monomial {
        let mut exps = vec![0u32; self.extended.generators().len()];
        for (i, &e) in m.exponents().iter().enumerate() {
            exps[self.base_to_ext[i]] = e;
        }
        Monomial::from_exponents(exps)
    }

    /// The monomial m*u in the extended ring, or `None` if truncation
    /// kills it.
    fn lift_monomial(&self, m: &Monomial) -> Option<Monomial> {
        let lifted = self.lift_exponents(m);
        self.extended
            .merge_monomials(&lifted, &self.u_monomial)
            .map(|(merged, _)| merged)
    }

    /// The window embedding of the base into the extended ring. This is a
    /// linear map of spans, not a ring map: base relations kill powers
    /// that the extended ring keeps; those powers die again once
    /// multiplied by u.
    pub fn lift(&self, a: &GradedElement) -> Result<GradedElement> {
        if !crate::ring::same_ring(a.ring(), &self.base) {
            return Err(Error::RingMismatch);
        }
        GradedElement::from_terms(
            &self.extended,
            a.terms().map(|(m, c)| (self.lift_exponents(m), c.clone())),
        )
    }

    /// a*u computed in the extended ring, for a in the base ring.
    pub fn times_u(&self, a: &GradedElement) -> Result<GradedElement> {
        self.lift(a)?.mul(&self.u)
    }

    /// The unique base element q with lift(q)*u = e and all exponents in
    /// the base truncation window.
    pub fn divide(&self, e: &GradedElement) -> Result<GradedElement> {
        if !crate::ring::same_ring(e.ring(), &self.extended) {
            return Err(Error::RingMismatch);
        }
        let n_base = self.base.generators().len();
        let mut terms: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in e.terms() {
            let mut base_exps = vec![0u32; n_base];
            for (idx, (&me, &ue)) in m
                .exponents()
                .iter()
                .zip(self.u_monomial.exponents())
                .enumerate()
            {
                if me < ue {
                    return Err(Error::NotDivisible(format!(
                        "term {c}*[{:?}] lacks a factor of the Thom class",
                        m.exponents()
                    )));
                }
                let q = me - ue;
                if q == 0 {
                    continue;
                }
                match self.base_to_ext.iter().position(|&j| j == idx) {
                    Some(base_idx) => {
                        if q > self.base.generators()[base_idx].exponent_bound() {
                            return Err(Error::NotDivisible(format!(
                                "quotient exponent {q} on `{}` leaves the base truncation window",
                                self.extended.generators()[idx].name
                            )));
                        }
                        base_exps[base_idx] = q;
                    }
                    None => {
                        return Err(Error::NotDivisible(format!(
                            "quotient uses `{}`, which is not a base generator",
                            self.extended.generators()[idx].name
                        )));
                    }
                }
            }
            let q_monomial = Monomial::from_exponents(base_exps);
            // lift(q)*u = sign * (q+u), so the quotient coefficient picks
            // up the same Koszul sign.
            let sign = self
                .extended
                .product_sign(&self.lift_exponents(&q_monomial), &self.u_monomial);
            let coeff = if sign < 0 { -c } else { c.clone() };
            terms.push((q_monomial, coeff));
        }
        let q = GradedElement::from_terms(&self.base, terms)?;
        if self.times_u(&q)? != *e {
            return Err(Error::NotDivisible(
                "element is not a base multiple of the Thom class".into(),
            ));
        }
        Ok(q)
    }

    /// rho_alpha for an operation on the extended ring: the unique class
    /// with alpha(u) = rho * u.
    pub fn rho(&self, op: &Operation) -> Result<GradedElement> {
        if !crate::ring::same_ring(op.ring(), &self.extended) {
            return Err(Error::RingMismatch);
        }
        self.divide(&op.apply(&self.u)?)
    }
}

/// Builds the Thom model of a bundle: each factor carrying m summands has
/// its truncation raised by m, and u is the product of one generator
/// occurrence per summand.
pub fn build_thom_model(space: &SpaceModel, bundle: &BundleDescriptor) -> Result<ThomData> {
    bundle.validate_over(space)?;
    let counts = bundle.multiplicity_per_factor(space.factors().len());
    let (extended, gen_of_factor) = model_ring(space.factors(), space.theory(), &counts)?;
    let mut u_exps = vec![0u32; extended.generators().len()];
    for (i, &count) in counts.iter().enumerate() {
        if count > 0 {
            let idx = gen_of_factor[i].expect("bumped factor has a generator");
            u_exps[idx] = count;
        }
    }
    let u = GradedElement::from_terms(
        &extended,
        [(Monomial::from_exponents(u_exps), BigInt::one())],
    )?;
    let mut td = ThomData::from_parts(
        space.ring(),
        &extended,
        u,
        format!("{} over {}", bundle, space),
    )?;
    td.model = Some(ModelInfo {
        space: space.clone(),
        bundle: bundle.clone(),
        ext_gen_of_factor: gen_of_factor,
    });
    Ok(td)
}

/// rho by the division oracle. The operation must live on the extended
/// ring of `build_thom_model(space, bundle)`.
pub fn rho_via_division(
    space: &SpaceModel,
    bundle: &BundleDescriptor,
    op: &Operation,
) -> Result<GradedElement> {
    build_thom_model(space, bundle)?.rho(op)
}

/// Builds the Thom model together with the operation of the given kind on
/// its extended ring, and returns rho by division.
pub fn rho_via_division_for_kind(
    space: &SpaceModel,
    bundle: &BundleDescriptor,
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<(ThomData, Operation, GradedElement)> {
    let td = build_thom_model(space, bundle)?;
    let op = kind.build(td.extended(), allow_degenerate)?;
    let rho = td.rho(&op)?;
    Ok((td, op, rho))
}

/// The closed form rho_k(line) = 1 + eta + ... + eta^{k-1} for the
/// tautological line of factor `line`, expanded in x = eta - 1 and
/// truncated: the sum of (1 + x_i)^j for j < k.
pub fn rho_line_closed_form(
    space: &SpaceModel,
    line: usize,
    k: i64,
    allow_degenerate: bool,
) -> Result<GradedElement> {
    if space.theory() != Theory::KTheory {
        return Err(Error::TheoryMismatch(
            "the line-bundle closed form lives in K-theory".into(),
        ));
    }
    if k < 0 || (k == 0 && !allow_degenerate) {
        return Err(Error::UnsupportedK(k));
    }
    if line >= space.factors().len() {
        return Err(Error::UnknownFactor(line + 1));
    }
    let ring = space.ring();
    let eta = match space.factor_generator(line) {
        Some(x) => GradedElement::one(ring).add(&x)?,
        None => GradedElement::one(ring),
    };
    let mut sum = GradedElement::zero(ring);
    let mut power = GradedElement::one(ring);
    for _ in 0..k {
        sum = sum.add(&power)?;
        power = power.mul(&eta)?;
    }
    Ok(sum)
}

/// rho by the splitting principle: the convolution product of the
/// per-line classes. Mod-2 coefficients kill the signs and K-theory
/// classes sit in degree 0, so the signed convolution reduces to the
/// plain product of 1 + a_i (sq) or the closed form (psi:k).
pub fn rho_via_splitting(
    space: &SpaceModel,
    bundle: &BundleDescriptor,
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<GradedElement> {
    bundle.validate_over(space)?;
    if kind.theory() != space.theory() {
        return Err(Error::TheoryMismatch(format!(
            "operation {kind} does not act on the {} theory",
            space.theory()
        )));
    }
    let ring = space.ring();
    let mut rho = GradedElement::one(ring);
    for &line in bundle.summands() {
        let per_line = match kind {
            OpKind::Sq => match space.factor_generator(line) {
                Some(a) => GradedElement::one(ring).add(&a)?,
                None => GradedElement::one(ring),
            },
            OpKind::Psi(k) => rho_line_closed_form(space, line, k, allow_degenerate)?,
        };
        rho = rho.mul(&per_line)?;
    }
    Ok(rho)
}

/// External product of Thom models with its embeddings.
pub struct ThomProduct {
    pub data: ThomData,
    pub base_left: RingMap,
    pub base_right: RingMap,
    pub ext_left: RingMap,
    pub ext_right: RingMap,
}

/// The smash-product model: base ring the external product of the bases,
/// extended ring the external product of the extended rings, and Thom
/// class u1 x u2. Model-built inputs combine into the product space model
/// (so factor naming follows the model convention); formal inputs combine
/// through the generic external product of rings.
pub fn external_thom_product(left: &ThomData, right: &ThomData) -> Result<ThomProduct> {
    if left.base().coefficients() != right.base().coefficients() {
        return Err(Error::TheoryMismatch(
            "external Thom products need a common theory".into(),
        ));
    }
    if let (Some(lm), Some(rm)) = (&left.model, &right.model) {
        if lm.space.theory() == rm.space.theory() {
            return external_thom_product_of_models(left, right);
        }
    }

    let (base, base_left, base_right) = external_product_ring(left.base(), right.base())?;
    let (extended, ext_left, ext_right) =
        external_product_ring(left.extended(), right.extended())?;
    let u = ext_left
        .apply(left.thom_class())?
        .mul(&ext_right.apply(right.thom_class())?)?;
    let data = ThomData::from_parts(
        &base,
        &extended,
        u,
        format!("({}) x ({})", left.label(), right.label()),
    )?;
    Ok(ThomProduct {
        data,
        base_left,
        base_right,
        ext_left,
        ext_right,
    })
}

fn external_thom_product_of_models(left: &ThomData, right: &ThomData) -> Result<ThomProduct> {
    let lm = left.model.as_ref().expect("model-built");
    let rm = right.model.as_ref().expect("model-built");

    let mut factors = lm.space.factors().to_vec();
    factors.extend_from_slice(rm.space.factors());
    let space = SpaceModel::new(factors, lm.space.theory())?;
    let shift = lm.space.factors().len();

    let mut summands = lm.bundle.summands().to_vec();
    summands.extend(rm.bundle.summands().iter().map(|&i| i + shift));
    let bundle = BundleDescriptor::new(summands)?;
    let data = build_thom_model(&space, &bundle)?;

    let left_assignment: Vec<usize> = (0..shift).collect();
    let right_assignment: Vec<usize> = (0..rm.space.factors().len()).map(|i| i + shift).collect();
    let base_left = pullback_map(&lm.space, &space, &left_assignment)?;
    let base_right = pullback_map(&rm.space, &space, &right_assignment)?;

    // Extended rings embed factor by factor; every factor keeps its
    // relative position, left block first.
    let prod_model = data.model.as_ref().expect("model-built");
    let ext_embedding = |src: &ThomData, offset: usize| -> Result<RingMap> {
        let src_model = src.model.as_ref().expect("model-built");
        let mut images = Vec::new();
        for (i, &gen) in src_model.ext_gen_of_factor.iter().enumerate() {
            if gen.is_some() {
                let prod_gen = prod_model.ext_gen_of_factor[i + offset]
                    .expect("factor keeps its generator in the product");
                images.push(GradedElement::generator(data.extended(), prod_gen));
            }
        }
        RingMap::new(src.extended(), data.extended(), images)
    };
    let ext_left = ext_embedding(left, 0)?;
    let ext_right = ext_embedding(right, shift)?;

    Ok(ThomProduct {
        data,
        base_left,
        base_right,
        ext_left,
        ext_right,
    })
}

/// The induced map of model rings for a map of spaces sending factor `i`
/// of the source space to factor `assignment[i]` of the target space
/// (covering truncation inclusions and factor projections). Generators
/// map to the corresponding generators, or to 0 over a point factor.
pub fn pullback_map(
    from: &SpaceModel,
    to: &SpaceModel,
    assignment: &[usize],
) -> Result<RingMap> {
    if from.theory() != to.theory() {
        return Err(Error::TheoryMismatch("spaces live in different theories".into()));
    }
    if assignment.len() != from.factors().len() {
        return Err(Error::InvalidSpec(format!(
            "assignment covers {} of {} factors",
            assignment.len(),
            from.factors().len()
        )));
    }
    let mut images = vec![GradedElement::zero(to.ring()); from.ring().generators().len()];
    for (i, &j) in assignment.iter().enumerate() {
        let target_factor = to
            .factors()
            .get(j)
            .ok_or(Error::UnknownFactor(j + 1))?;
        if target_factor.kind != from.factors()[i].kind {
            return Err(Error::TheoryMismatch(format!(
                "factor {} maps to a factor of a different kind",
                i + 1
            )));
        }
        if let Some(src_idx) = from.generator_index(i) {
            images[src_idx] = match to.factor_generator(j) {
                Some(g) => g,
                None => GradedElement::zero(to.ring()),
            };
        }
    }
    RingMap::new(from.ring(), to.ring(), images)
}

/// The bundle over the target space obtained by pulling back summands
/// along the same factor assignment.
pub fn pullback_bundle(bundle: &BundleDescriptor, assignment: &[usize]) -> Result<BundleDescriptor> {
    let summands = bundle
        .summands()
        .iter()
        .map(|&i| {
            assignment
                .get(i)
                .copied()
                .ok_or(Error::UnknownFactor(i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    BundleDescriptor::new(summands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{adams, total_sq, total_sw};

    fn cp_space(n: u32) -> SpaceModel {
        SpaceModel::new(vec![Factor::new(FactorKind::CP, n)], Theory::KTheory).unwrap()
    }

    fn rp_space(n: u32) -> SpaceModel {
        SpaceModel::new(vec![Factor::new(FactorKind::RP, n)], Theory::Mod2).unwrap()
    }

    fn line() -> BundleDescriptor {
        BundleDescriptor::new(vec![0]).unwrap()
    }

    #[test]
    fn build_thom_model_cp2() {
        let td = build_thom_model(&cp_space(2), &line()).unwrap();
        assert_eq!(td.extended().describe(), "Z[x]/(x^4), |x| = 0");
        assert_eq!(td.thom_class().to_string(), "x");
        assert_eq!(td.degree_of_u(), 0);
    }

    #[test]
    fn build_thom_model_rp2() {
        let td = build_thom_model(&rp_space(2), &line()).unwrap();
        assert_eq!(td.extended().describe(), "F2[a]/(a^4), |a| = 1");
        assert_eq!(td.thom_class().to_string(), "a");
        assert_eq!(td.degree_of_u(), 1);
    }

    #[test]
    fn build_thom_model_product() {
        let space = SpaceModel::new(
            vec![Factor::new(FactorKind::CP, 1), Factor::new(FactorKind::CP, 1)],
            Theory::KTheory,
        )
        .unwrap();
        let bundle = BundleDescriptor::new(vec![0, 1]).unwrap();
        let td = build_thom_model(&space, &bundle).unwrap();
        assert_eq!(td.extended().describe(), "Z[x1, x2]/(x1^3, x2^3), |x1| = 0, |x2| = 0");
        assert_eq!(td.thom_class().to_string(), "x1*x2");
    }

    #[test]
    fn theory_mismatch_rejected() {
        assert!(matches!(
            SpaceModel::new(vec![Factor::new(FactorKind::RP, 2)], Theory::KTheory),
            Err(Error::TheoryMismatch(_))
        ));
        let mixed = SpaceModel::new(
            vec![Factor::new(FactorKind::RP, 2), Factor::new(FactorKind::CP, 2)],
            Theory::Mod2,
        )
        .unwrap();
        // real line over the CP factor is not modelled
        let bundle = BundleDescriptor::new(vec![1]).unwrap();
        assert!(matches!(
            build_thom_model(&mixed, &bundle),
            Err(Error::UnsupportedBundle(_))
        ));
    }

    #[test]
    fn divide_examples() {
        // 2x + x^2 = (2 + x) * x in K(CP^3), base window K(CP^2)
        let td = build_thom_model(&cp_space(2), &line()).unwrap();
        let x = GradedElement::generator(td.extended(), 0);
        let e = x.scalar_mul(&BigInt::from(2)).add(&x.pow(2)).unwrap();
        assert_eq!(td.divide(&e).unwrap().to_string(), "2 + x");

        // a + a^2 = (1 + a) * a in H*(RP^3)
        let td2 = build_thom_model(&rp_space(2), &line()).unwrap();
        let a = GradedElement::generator(td2.extended(), 0);
        let e2 = a.add(&a.pow(2)).unwrap();
        assert_eq!(td2.divide(&e2).unwrap().to_string(), "1 + a");

        // 1 + x has a constant term: not divisible by u = x
        let bad = GradedElement::one(td.extended()).add(&x).unwrap();
        assert!(matches!(td.divide(&bad), Err(Error::NotDivisible(_))));

        // quotient outside the base window: base K(CP^1) inside K(CP^3),
        // u = x, then x^3 / x = x^2 exceeds the window
        let base = cp_space(1);
        let wide = cp_space(3);
        let td3 = ThomData::from_parts(
            base.ring(),
            wide.ring(),
            GradedElement::generator(wide.ring(), 0),
            "formal window",
        )
        .unwrap();
        let x3 = GradedElement::generator(wide.ring(), 0).pow(3);
        assert!(matches!(td3.divide(&x3), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn rho_via_division_examples() {
        // (CP^2, L1, psi^2) -> 2 + x, the class 1 + eta
        let td = build_thom_model(&cp_space(2), &line()).unwrap();
        let psi2 = adams(td.extended(), 2, false).unwrap();
        assert_eq!(td.rho(&psi2).unwrap().to_string(), "2 + x");

        // (RP^2, L1, Sq) -> 1 + a
        let td2 = build_thom_model(&rp_space(2), &line()).unwrap();
        let sq = total_sq(td2.extended()).unwrap();
        assert_eq!(td2.rho(&sq).unwrap().to_string(), "1 + a");

        // trivial line over a point: rho = 2 for psi^2
        let td3 = build_thom_model(&cp_space(0), &line()).unwrap();
        let psi2 = adams(td3.extended(), 2, false).unwrap();
        assert_eq!(td3.rho(&psi2).unwrap().to_string(), "2");
    }

    #[test]
    fn closed_form_examples() {
        let space = cp_space(3);
        assert_eq!(
            rho_line_closed_form(&space, 0, 2, false).unwrap().to_string(),
            "2 + x"
        );
        assert_eq!(
            rho_line_closed_form(&space, 0, 3, false).unwrap().to_string(),
            "3 + 3*x + x^2"
        );
        assert!(rho_line_closed_form(&space, 0, 1, false).unwrap().is_one());
        assert!(matches!(
            rho_line_closed_form(&space, 0, 0, false),
            Err(Error::UnsupportedK(0))
        ));
    }

    #[test]
    fn splitting_examples() {
        let space = SpaceModel::new(
            vec![Factor::new(FactorKind::CP, 1), Factor::new(FactorKind::CP, 1)],
            Theory::KTheory,
        )
        .unwrap();
        let bundle = BundleDescriptor::new(vec![0, 1]).unwrap();
        assert_eq!(
            rho_via_splitting(&space, &bundle, OpKind::Psi(2), false)
                .unwrap()
                .to_string(),
            "4 + 2*x1 + 2*x2 + x1*x2"
        );

        let rp_prod = SpaceModel::new(
            vec![Factor::new(FactorKind::RP, 2), Factor::new(FactorKind::RP, 2)],
            Theory::Mod2,
        )
        .unwrap();
        let b2 = BundleDescriptor::new(vec![0, 1]).unwrap();
        assert_eq!(
            rho_via_splitting(&rp_prod, &b2, OpKind::Sq, false)
                .unwrap()
                .to_string(),
            "1 + a + b + a*b"
        );

        // repeated summand: rho(2 L1) = (2 + x)^2 over CP^2
        let space2 = cp_space(2);
        let double = BundleDescriptor::new(vec![0, 0]).unwrap();
        let split = rho_via_splitting(&space2, &double, OpKind::Psi(2), false).unwrap();
        assert_eq!(split.to_string(), "4 + 4*x + x^2");
        // division oracle on the extended ring K(CP^4) with u = x^2 agrees
        let (_, _, by_division) =
            rho_via_division_for_kind(&space2, &double, OpKind::Psi(2), false).unwrap();
        assert_eq!(by_division, split);
    }

    #[test]
    fn splitting_agrees_with_division_on_examples() {
        let space = SpaceModel::new(
            vec![Factor::new(FactorKind::CP, 1), Factor::new(FactorKind::CP, 1)],
            Theory::KTheory,
        )
        .unwrap();
        let bundle = BundleDescriptor::new(vec![0, 1]).unwrap();
        let (_, _, division) =
            rho_via_division_for_kind(&space, &bundle, OpKind::Psi(2), false).unwrap();
        assert_eq!(
            division,
            rho_via_splitting(&space, &bundle, OpKind::Psi(2), false).unwrap()
        );
    }

    #[test]
    fn external_product_of_thom_models() {
        let td = build_thom_model(&cp_space(1), &line()).unwrap();
        let prod = external_thom_product(&td, &td).unwrap();
        assert_eq!(prod.data.thom_class().to_string(), "x1*x2");
        assert_eq!(prod.data.degree_of_u(), 0);

        let rp = build_thom_model(&rp_space(1), &line()).unwrap();
        let rp_prod = external_thom_product(&rp, &rp).unwrap();
        assert_eq!(rp_prod.data.thom_class().to_string(), "a*b");
        assert_eq!(rp_prod.data.degree_of_u(), 2);
    }

    #[test]
    fn injectivity_exhaustive() {
        for n in 0..=4 {
            let space = cp_space(n);
            for rank in 1..=3 {
                let bundle = BundleDescriptor::new(vec![0; rank]).unwrap();
                let td = build_thom_model(&space, &bundle).unwrap();
                for m in td.base().basis() {
                    let e = GradedElement::from_terms(td.base(), [(m.clone(), BigInt::one())])
                        .unwrap();
                    assert!(!td.times_u(&e).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn stability_under_truncation() {
        // rho over CP(N) restricted to CP(M) equals rho over CP(M)
        for n in 1..=6u32 {
            for m in 0..n {
                let big = cp_space(n);
                let small = cp_space(m);
                let f = pullback_map(&big, &small, &[0]).unwrap();
                for k in [1, 2, 3, 5] {
                    let (_, _, rho_big) =
                        rho_via_division_for_kind(&big, &line(), OpKind::Psi(k), false).unwrap();
                    let (_, _, rho_small) =
                        rho_via_division_for_kind(&small, &line(), OpKind::Psi(k), false).unwrap();
                    assert_eq!(f.apply(&rho_big).unwrap(), rho_small);
                }
            }
        }
    }

    #[test]
    fn pullback_map_projection() {
        // p: CP(2) x CP(1) -> CP(2) induces x |-> x1
        let product = SpaceModel::new(
            vec![Factor::new(FactorKind::CP, 2), Factor::new(FactorKind::CP, 1)],
            Theory::KTheory,
        )
        .unwrap();
        let single = cp_space(2);
        let p = pullback_map(&single, &product, &[0]).unwrap();
        let x = GradedElement::generator(single.ring(), 0);
        assert_eq!(p.apply(&x).unwrap().to_string(), "x1");
    }

    #[test]
    fn bundle_display_round_trip_shapes() {
        let b = BundleDescriptor::new(vec![0, 0, 1]).unwrap();
        assert_eq!(b.to_string(), "2*L1 + L2");
        let c = BundleDescriptor::new(vec![0, 1, 0]).unwrap();
        assert_eq!(c.to_string(), "L1 + L2 + L1");
    }
}
