//! Exhaustive machine verification of the identity and module-structure
//! statements behind the twisting classes, with counterexample reporting.
//!
//! Every check walks a finite monomial basis, is deterministic and side
//! effect free, and renders both sides of the first failing case in
//! canonical text form.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{make_formal_operation_named, OpKind, Operation};
use crate::ring::{GeneratorSpec, GradedElement, Monomial, RingMap, RingSpec};
use crate::thom::{
    build_thom_model, external_thom_product, pullback_bundle, pullback_map, BundleDescriptor,
    Factor, FactorKind, SpaceModel, Theory, ThomData,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First failing case of a check, with both sides rendered canonically.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub left: String,
    pub right: String,
}

/// Structured pass/fail result of one exhaustive check.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub cases: usize,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Case accumulator: counts cases, keeps the first counterexample in
/// basis order.
struct Checker {
    name: String,
    cases: usize,
    counterexample: Option<Counterexample>,
}

impl Checker {
    fn new(name: impl Into<String>) -> Self {
        Checker {
            name: name.into(),
            cases: 0,
            counterexample: None,
        }
    }

    fn eq_case(
        &mut self,
        case: impl FnOnce() -> String,
        left: &GradedElement,
        right: &GradedElement,
    ) {
        self.cases += 1;
        if self.counterexample.is_none() && left != right {
            self.counterexample = Some(Counterexample {
                case: case(),
                left: left.to_string(),
                right: right.to_string(),
            });
        }
    }

    fn bool_case(&mut self, case: impl FnOnce() -> String, ok: bool, left: String, right: String) {
        self.cases += 1;
        if self.counterexample.is_none() && !ok {
            self.counterexample = Some(Counterexample {
                case: case(),
                left,
                right,
            });
        }
    }

    fn report(self) -> VerificationReport {
        let status = if self.counterexample.is_none() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            check: self.name,
            cases: self.cases,
            status,
            counterexample: self.counterexample,
        }
    }
}

/// The twisted module action a |-> alpha(a) * rho on the operation's
/// ring; additive because alpha is and multiplication distributes. This
/// is the action that makes the Thom map a module isomorphism.
#[derive(Debug, Clone)]
pub struct TwistedAction {
    op: Operation,
    twist: GradedElement,
}

impl TwistedAction {
    pub fn new(op: Operation, twist: GradedElement) -> Result<Self> {
        if !crate::ring::same_ring(op.ring(), twist.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(TwistedAction { op, twist })
    }

    pub fn op(&self) -> &Operation {
        &self.op
    }

    pub fn twist(&self) -> &GradedElement {
        &self.twist
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement> {
        self.op.apply(a)?.mul(&self.twist)
    }
}

fn basis_element(ring: &Arc<RingSpec>, m: &Monomial) -> GradedElement {
    GradedElement::from_terms(ring, [(m.clone(), BigInt::one())]).expect("basis monomial")
}

/// Deterministic small-coefficient cycle for additive checks over Z.
const COEFF_CYCLE: [i64; 12] = [3, -7, 5, -2, 9, -4, 1, -8, 6, -9, 2, 7];

fn cycle_coeff(i: usize) -> BigInt {
    BigInt::from(COEFF_CYCLE[i % COEFF_CYCLE.len()])
}

/// Dense element with every basis monomial and cycling coefficients,
/// offset by `round`.
fn dense_element(ring: &Arc<RingSpec>, round: usize) -> GradedElement {
    GradedElement::from_terms(
        ring,
        ring.basis()
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), cycle_coeff(round * 5 + i))),
    )
    .expect("basis monomials")
}

// ---------------------------------------------------------------------
// kernel laws
// ---------------------------------------------------------------------

fn kernel_cases(ch: &mut Checker, prefix: &str, ring: &Arc<RingSpec>) -> Result<()> {
    // truncation / exterior relations
    for (i, g) in ring.generators().iter().enumerate() {
        let e = GradedElement::generator(ring, i).pow(g.exponent_bound() + 1);
        ch.eq_case(
            || format!("{prefix}: relation for `{}`", g.name),
            &e,
            &GradedElement::zero(ring),
        );
    }

    // graded commutativity and degree additivity, exhaustive on basis pairs
    for m in ring.basis() {
        for n in ring.basis() {
            let em = basis_element(ring, m);
            let en = basis_element(ring, n);
            let mn = em.mul(&en)?;
            let nm = en.mul(&em)?;
            let flip = ring.monomial_degree(m) % 2 == 1 && ring.monomial_degree(n) % 2 == 1;
            let expected = if flip { nm.neg() } else { nm };
            ch.eq_case(|| format!("{prefix}: graded commutativity at ({em}, {en})"), &mn, &expected);
            if !mn.is_zero() {
                let want = ring.monomial_degree(m) + ring.monomial_degree(n);
                ch.bool_case(
                    || format!("{prefix}: degree additivity at ({em}, {en})"),
                    mn.homogeneous_degree() == Some(want),
                    format!("degree {:?}", mn.homogeneous_degree()),
                    format!("degree {want}"),
                );
            }
        }
    }

    // ring laws on dense elements with deterministic coefficients
    for round in 0..4 {
        let a = dense_element(ring, 3 * round);
        let b = dense_element(ring, 3 * round + 1);
        let c = dense_element(ring, 3 * round + 2);
        ch.eq_case(
            || format!("{prefix}: a+b = b+a (round {round})"),
            &a.add(&b)?,
            &b.add(&a)?,
        );
        ch.eq_case(
            || format!("{prefix}: (a+b)+c = a+(b+c) (round {round})"),
            &a.add(&b)?.add(&c)?,
            &a.add(&b.add(&c)?)?,
        );
        ch.eq_case(
            || format!("{prefix}: (ab)c = a(bc) (round {round})"),
            &a.mul(&b)?.mul(&c)?,
            &a.mul(&b.mul(&c)?)?,
        );
        ch.eq_case(
            || format!("{prefix}: a(b+c) = ab+ac (round {round})"),
            &a.mul(&b.add(&c)?)?,
            &a.mul(&b)?.add(&a.mul(&c)?)?,
        );
    }
    Ok(())
}

/// Graded commutativity, associativity, distributivity, truncation and
/// Koszul-sign laws on one ring.
pub fn check_kernel_laws(ring: &Arc<RingSpec>) -> Result<VerificationReport> {
    let mut ch = Checker::new("kernel-laws");
    kernel_cases(&mut ch, &ring.describe(), ring)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// operation axioms
// ---------------------------------------------------------------------

fn map_axiom_cases(
    ch: &mut Checker,
    prefix: &str,
    ring: &Arc<RingSpec>,
    apply: &dyn Fn(&GradedElement) -> Result<GradedElement>,
) -> Result<()> {
    let basis: Vec<GradedElement> = ring.basis().iter().map(|m| basis_element(ring, m)).collect();
    let images: Vec<GradedElement> = basis.iter().map(|e| apply(e)).collect::<Result<_>>()?;
    let index: BTreeMap<&Monomial, usize> =
        ring.basis().iter().enumerate().map(|(i, m)| (m, i)).collect();

    for (i, m) in ring.basis().iter().enumerate() {
        for (j, n) in ring.basis().iter().enumerate() {
            // multiplicativity on the pair
            let product = basis[i].mul(&basis[j])?;
            let lhs = apply(&product)?;
            let rhs = images[i].mul(&images[j])?;
            ch.eq_case(
                || format!("{prefix}: alpha(m*n) = alpha(m)alpha(n) at ({}, {})", basis[i], basis[j]),
                &lhs,
                &rhs,
            );
            // additivity with small integer coefficients
            let c = cycle_coeff(i + 2 * j);
            let d = cycle_coeff(i + 2 * j + 1);
            let x = basis[i].scalar_mul(&c);
            let y = basis[j].scalar_mul(&d);
            let sum_image = apply(&x.add(&y)?)?;
            let image_sum = apply(&x)?.add(&apply(&y)?)?;
            ch.eq_case(
                || {
                    format!(
                        "{prefix}: alpha(x+y) = alpha(x)+alpha(y) at x = {c}*({}), y = {d}*({})",
                        basis[i], basis[j]
                    )
                },
                &sum_image,
                &image_sum,
            );
            let _ = (m, n, &index);
        }
    }
    Ok(())
}

/// Additivity and multiplicativity of an operation, exhaustive on basis
/// pairs.
pub fn check_operation_axioms(op: &Operation) -> Result<VerificationReport> {
    let mut ch = Checker::new("operation-axioms");
    let prefix = format!("{} on {}", op.label(), op.ring().describe());
    map_axiom_cases(&mut ch, &prefix, op.ring(), &|e| op.apply(e))?;
    Ok(ch.report())
}

/// Same sweep for an arbitrary map, so deliberately broken term-wise maps
/// can serve as negative controls.
pub fn check_map_axioms(
    ring: &Arc<RingSpec>,
    label: &str,
    apply: &dyn Fn(&GradedElement) -> Result<GradedElement>,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("operation-axioms");
    map_axiom_cases(&mut ch, label, ring, apply)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// the defining identity alpha(a u) = (alpha(a) rho) u
// ---------------------------------------------------------------------

fn eqm_cases(ch: &mut Checker, prefix: &str, td: &ThomData, op: &Operation) -> Result<()> {
    let rho = td.rho(op)?;
    let rho_lifted = td.lift(&rho)?;
    for m in td.base().basis() {
        let a = basis_element(td.base(), m);
        let lhs = op.apply(&td.times_u(&a)?)?;
        let rhs = op
            .apply(&td.lift(&a)?)?
            .mul(&rho_lifted)?
            .mul(td.thom_class())?;
        ch.eq_case(|| format!("{prefix}: a = {a}"), &lhs, &rhs);
    }
    Ok(())
}

/// For every base basis monomial a: alpha(a*u) = (alpha(a)*rho)*u, with
/// rho extracted by division.
pub fn check_eqm(td: &ThomData, op: &Operation) -> Result<VerificationReport> {
    let mut ch = Checker::new("eqm");
    eqm_cases(&mut ch, td.label(), td, op)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// Thom map as a module isomorphism
// ---------------------------------------------------------------------

fn iso_cases(
    ch: &mut Checker,
    prefix: &str,
    td: &ThomData,
    base_op: &Operation,
    ext_op: &Operation,
    twist: Option<&GradedElement>,
) -> Result<()> {
    let rho = match twist {
        Some(t) => t.clone(),
        None => td.rho(ext_op)?,
    };
    let action = TwistedAction::new(base_op.clone(), rho)?;

    // (i) additive bijection onto the ideal: each basis monomial survives
    // multiplication by u, and distinct monomials stay distinct (their
    // images are distinct monomials by construction).
    for m in td.base().basis() {
        let a = basis_element(td.base(), m);
        let image = td.times_u(&a)?;
        ch.bool_case(
            || format!("{prefix}: injectivity at a = {a}"),
            !image.is_zero(),
            format!("{a} * u = {image}"),
            "a nonzero multiple of u".into(),
        );
    }

    // (ii) the map intertwines the twisted action with the plain action
    for m in td.base().basis() {
        let a = basis_element(td.base(), m);
        let lhs = td.times_u(&action.apply(&a)?)?;
        let rhs = ext_op.apply(&td.times_u(&a)?)?;
        ch.eq_case(|| format!("{prefix}: module action at a = {a}"), &lhs, &rhs);
    }
    Ok(())
}

/// The Thom map a |-> a*u as an isomorphism of modules: injective on the
/// base span and intertwining the twisted action alpha(-)*rho with the
/// plain action of alpha on the extended ring.
pub fn check_thom_module_iso(
    td: &ThomData,
    base_op: &Operation,
    ext_op: &Operation,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("thom-module-iso");
    iso_cases(&mut ch, td.label(), td, base_op, ext_op, None)?;
    Ok(ch.report())
}

/// Same check with an explicit twist, for perturbed negative controls.
pub fn check_thom_module_iso_with_twist(
    td: &ThomData,
    base_op: &Operation,
    ext_op: &Operation,
    twist: &GradedElement,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("thom-module-iso");
    iso_cases(&mut ch, td.label(), td, base_op, ext_op, Some(twist))?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// composite module map (Thom leg followed by an operation-commuting map)
// ---------------------------------------------------------------------

fn composite_cases(
    ch: &mut Checker,
    prefix: &str,
    td: &ThomData,
    base_op: &Operation,
    ext_op: &Operation,
    g: &RingMap,
    target_op: &Operation,
) -> Result<()> {
    if !crate::ring::same_ring(g.source(), td.extended()) {
        return Err(Error::RingMismatch);
    }
    // g must commute with the operation before any module claim is made
    for m in td.extended().basis() {
        let e = basis_element(td.extended(), m);
        let left = g.apply(&ext_op.apply(&e)?)?;
        let right = target_op.apply(&g.apply(&e)?)?;
        if left != right {
            return Err(Error::NotCommuting(format!(
                "at {e}: g(alpha(e)) = {left} but alpha(g(e)) = {right}"
            )));
        }
    }

    let rho = td.rho(ext_op)?;
    let action = TwistedAction::new(base_op.clone(), rho)?;
    for m in td.base().basis() {
        let a = basis_element(td.base(), m);
        let lhs = g.apply(&td.times_u(&action.apply(&a)?)?)?;
        let rhs = target_op.apply(&g.apply(&td.times_u(&a)?)?)?;
        ch.eq_case(|| format!("{prefix}: a = {a}"), &lhs, &rhs);
    }
    Ok(())
}

/// The composite a |-> g(a*u) for an operation-commuting ring map g
/// intertwines the twisted action with the plain one. Errors with
/// `NotCommuting` when g fails the naturality premise.
pub fn check_composite_module_map(
    td: &ThomData,
    base_op: &Operation,
    ext_op: &Operation,
    g: &RingMap,
    target_op: &Operation,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("composite-module-map");
    composite_cases(&mut ch, td.label(), td, base_op, ext_op, g, target_op)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// sum formula
// ---------------------------------------------------------------------

fn sum_formula_cases(
    ch: &mut Checker,
    prefix: &str,
    space: &SpaceModel,
    b1: &BundleDescriptor,
    b2: &BundleDescriptor,
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<()> {
    let td1 = build_thom_model(space, b1)?;
    let td2 = build_thom_model(space, b2)?;
    let combined = b1.sum(b2);
    let td12 = build_thom_model(space, &combined)?;

    let rho1 = td1.rho(&kind.build(td1.extended(), allow_degenerate)?)?;
    let rho2 = td2.rho(&kind.build(td2.extended(), allow_degenerate)?)?;
    let rho12 = td12.rho(&kind.build(td12.extended(), allow_degenerate)?)?;

    let u1_degree = td1.degree_of_u();
    for k in 0..=space.ring().top_degree() {
        let lhs = rho12.degree_part(k);
        let mut rhs = GradedElement::zero(space.ring());
        for i in 0..=k {
            let j = k - i;
            let mut term = rho1.degree_part(i).mul(&rho2.degree_part(j))?;
            if (u1_degree * j) % 2 == 1 {
                term = term.neg();
            }
            rhs = rhs.add(&term)?;
        }
        ch.eq_case(|| format!("{prefix}: degree {k} slice"), &lhs, &rhs);
    }
    Ok(())
}

/// Degree-by-degree signed convolution [rho(b1+b2)]_k =
/// sum (-1)^{j|u1|} [rho(b1)]_i [rho(b2)]_j against the division oracle
/// for the concatenated bundle.
pub fn check_sum_formula(
    space: &SpaceModel,
    b1: &BundleDescriptor,
    b2: &BundleDescriptor,
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("sum-formula");
    let prefix = format!("{kind} on ({b1}) + ({b2}) over {space}");
    sum_formula_cases(&mut ch, &prefix, space, b1, b2, kind, allow_degenerate)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// signed product formula for external products
// ---------------------------------------------------------------------

fn generator_index_of(e: &GradedElement) -> Option<usize> {
    let (m, c) = e.as_single_term()?;
    if !c.is_one() {
        return None;
    }
    let mut index = None;
    for (i, &exp) in m.exponents().iter().enumerate() {
        match exp {
            0 => {}
            1 if index.is_none() => index = Some(i),
            _ => return None,
        }
    }
    index
}

/// The operation alpha1 x alpha2 on the extended ring of an external Thom
/// product, acting block by block through the embeddings.
fn external_operation(
    prod: &crate::thom::ThomProduct,
    op1: &Operation,
    op2: &Operation,
) -> Result<Operation> {
    let ext = prod.data.extended();
    let mut images: Vec<Option<GradedElement>> = vec![None; ext.generators().len()];
    for (embed, op) in [(&prod.ext_left, op1), (&prod.ext_right, op2)] {
        for (i, image) in op.images().iter().enumerate() {
            let target = generator_index_of(&embed.images()[i]).ok_or_else(|| {
                Error::InvalidSpec("embedding does not send generators to generators".into())
            })?;
            images[target] = Some(embed.apply(image)?);
        }
    }
    let images: Vec<GradedElement> = images
        .into_iter()
        .map(|img| img.ok_or_else(|| {
            Error::InvalidSpec("a product generator received no operation image".into())
        }))
        .collect::<Result<_>>()?;
    make_formal_operation(ext, images, format!("{} x {}", op1.label(), op2.label()))
}

use crate::ops::make_formal_operation;

fn product_signed_cases(
    ch: &mut Checker,
    prefix: &str,
    td1: &ThomData,
    op1: &Operation,
    td2: &ThomData,
    op2: &Operation,
    include_sign: bool,
) -> Result<()> {
    let prod = external_thom_product(td1, td2)?;
    let rho1 = td1.rho(op1)?;
    let rho2 = td2.rho(op2)?;
    let op = external_operation(&prod, op1, op2)?;
    let rho_prod = prod.data.rho(&op)?;

    let u1_degree = td1.degree_of_u();
    let base = prod.data.base();
    for k in 0..=base.top_degree() {
        let lhs = rho_prod.degree_part(k);
        let mut rhs = GradedElement::zero(base);
        for i in 0..=k {
            let j = k - i;
            let left = prod.base_left.apply(&rho1.degree_part(i))?;
            let right = prod.base_right.apply(&rho2.degree_part(j))?;
            let mut term = left.mul(&right)?;
            if include_sign && (u1_degree * j) % 2 == 1 {
                term = term.neg();
            }
            rhs = rhs.add(&term)?;
        }
        ch.eq_case(|| format!("{prefix}: degree {k} slice"), &lhs, &rhs);
    }
    Ok(())
}

/// The external-product formula [rho(xi x zeta)]_k =
/// sum (-1)^{j|u_xi|} [rho(xi)]_i x [rho(zeta)]_j, with the sign
/// optionally dropped to expose it as the exact discrepancy.
pub fn check_product_formula_signed(
    td1: &ThomData,
    op1: &Operation,
    td2: &ThomData,
    op2: &Operation,
    include_sign: bool,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("product-formula-signed");
    let prefix = format!("({}) x ({})", td1.label(), td2.label());
    product_signed_cases(&mut ch, &prefix, td1, op1, td2, op2, include_sign)?;
    Ok(ch.report())
}

/// The built-in odd-degree instance: exterior base rings Z<s> and Z<t>
/// inside Z<s,u> and Z<t,v> with Thom classes u and v, and operations
/// s -> s, u -> u + su (resp. t -> t, v -> v + tv), whose twists
/// rho = 1 + s and 1 + t have odd-degree parts.
pub fn builtin_exterior_instance() -> Result<(ThomData, Operation, ThomData, Operation)> {
    let make_side = |base_name: &str, ext_name: &str| -> Result<(ThomData, Operation)> {
        let base = RingSpec::new(
            crate::ring::Coefficients::Integer,
            vec![GeneratorSpec::exterior(base_name, 1)],
        )?;
        let extended = RingSpec::new(
            crate::ring::Coefficients::Integer,
            vec![
                GeneratorSpec::exterior(base_name, 1),
                GeneratorSpec::exterior(ext_name, 1),
            ],
        )?;
        let s = GradedElement::generator(&extended, 0);
        let u = GradedElement::generator(&extended, 1);
        let td = ThomData::from_parts(
            &base,
            &extended,
            u.clone(),
            format!("formal exterior ({base_name}; {ext_name})"),
        )?;
        let op = make_formal_operation_named(
            &extended,
            &[(ext_name, u.add(&s.mul(&u)?)?)],
            format!("alpha_{base_name}"),
        )?;
        Ok((td, op))
    };
    let (td1, op1) = make_side("s", "u")?;
    let (td2, op2) = make_side("t", "v")?;
    Ok((td1, op1, td2, op2))
}

// ---------------------------------------------------------------------
// naturality
// ---------------------------------------------------------------------

fn naturality_cases(
    ch: &mut Checker,
    prefix: &str,
    from: &SpaceModel,
    bundle: &BundleDescriptor,
    to: &SpaceModel,
    assignment: &[usize],
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<()> {
    let f = pullback_map(from, to, assignment)?;
    let pulled = pullback_bundle(bundle, assignment)?;

    let td_up = build_thom_model(from, bundle)?;
    let rho_up = td_up.rho(&kind.build(td_up.extended(), allow_degenerate)?)?;
    let td_down = build_thom_model(to, &pulled)?;
    let rho_down = td_down.rho(&kind.build(td_down.extended(), allow_degenerate)?)?;

    ch.eq_case(
        || prefix.to_string(),
        &f.apply(&rho_up)?,
        &rho_down,
    );
    Ok(())
}

/// rho(f* xi) = f* rho(xi) for a model map (truncation restriction or
/// factor projection pullback) described by a factor assignment.
pub fn check_naturality(
    from: &SpaceModel,
    bundle: &BundleDescriptor,
    to: &SpaceModel,
    assignment: &[usize],
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("naturality");
    let prefix = format!("{kind}, {bundle} over {from} pulled to {to}");
    naturality_cases(&mut ch, &prefix, from, bundle, to, assignment, kind, allow_degenerate)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// permutation invariance of the summand list
// ---------------------------------------------------------------------

fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    fn go(remaining: &mut Vec<usize>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(current.clone());
            return;
        }
        let mut used = Vec::new();
        for i in 0..remaining.len() {
            let x = remaining[i];
            if used.contains(&x) {
                continue;
            }
            used.push(x);
            remaining.remove(i);
            current.push(x);
            go(remaining, current, out);
            current.pop();
            remaining.insert(i, x);
        }
    }
    let mut remaining = items.to_vec();
    let mut out = Vec::new();
    go(&mut remaining, &mut Vec::new(), &mut out);
    out
}

fn permutation_cases(
    ch: &mut Checker,
    prefix: &str,
    space: &SpaceModel,
    bundle: &BundleDescriptor,
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<()> {
    let td = build_thom_model(space, bundle)?;
    let reference = td.rho(&kind.build(td.extended(), allow_degenerate)?)?;
    for perm in distinct_permutations(bundle.summands()) {
        let permuted = BundleDescriptor::new(perm)?;
        let td_p = build_thom_model(space, &permuted)?;
        let rho_p = td_p.rho(&kind.build(td_p.extended(), allow_degenerate)?)?;
        ch.eq_case(
            || format!("{prefix}: ordering {permuted}"),
            &rho_p,
            &reference,
        );
    }
    Ok(())
}

/// Permuting the summand list of a bundle leaves rho unchanged — the
/// model-level fragment of invariance under bundle isomorphism.
pub fn check_permutation_invariance(
    space: &SpaceModel,
    bundle: &BundleDescriptor,
    kind: OpKind,
    allow_degenerate: bool,
) -> Result<VerificationReport> {
    let mut ch = Checker::new("permutation-invariance");
    let prefix = format!("{kind}, {bundle} over {space}");
    permutation_cases(&mut ch, &prefix, space, bundle, kind, allow_degenerate)?;
    Ok(ch.report())
}

// ---------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------

/// Bounds of the verification sweep. The defaults keep the whole suite in
/// the seconds range.
#[derive(Debug, Clone)]
pub struct SuiteBounds {
    pub max_factors: usize,
    pub max_n: u32,
    pub max_summands: usize,
    pub ks: Vec<i64>,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            max_factors: 2,
            max_n: 4,
            max_summands: 3,
            ks: vec![1, 2, 3, 5],
        }
    }
}

struct Config {
    space: SpaceModel,
    bundle: BundleDescriptor,
    kind: OpKind,
}

fn suite_spaces(theory: Theory, bounds: &SuiteBounds) -> Result<Vec<SpaceModel>> {
    let kind = match theory {
        Theory::Mod2 => FactorKind::RP,
        Theory::KTheory => FactorKind::CP,
    };
    let mut spaces = Vec::new();
    let mut stack: Vec<Vec<u32>> = (0..=bounds.max_n).map(|n| vec![n]).collect();
    while let Some(ns) = stack.pop() {
        let factors = ns.iter().map(|&n| Factor::new(kind, n)).collect();
        spaces.push(SpaceModel::new(factors, theory)?);
        if ns.len() < bounds.max_factors {
            for n in 0..=bounds.max_n {
                let mut next = ns.clone();
                next.push(n);
                stack.push(next);
            }
        }
    }
    spaces.sort_by_key(|s| (s.factors().len(), s.to_string()));
    Ok(spaces)
}

/// Non-decreasing summand multisets of each size up to the bound.
fn suite_bundles(n_factors: usize, max_summands: usize) -> Vec<BundleDescriptor> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n_factors).map(|i| vec![i]).collect();
    while let Some(summands) = stack.pop() {
        if summands.len() < max_summands {
            let last = *summands.last().expect("nonempty");
            for i in last..n_factors {
                let mut next = summands.clone();
                next.push(i);
                stack.push(next);
            }
        }
        out.push(BundleDescriptor::new(summands).expect("nonempty"));
    }
    out.sort_by_key(|b| (b.rank(), b.to_string()));
    out
}

fn suite_configs(bounds: &SuiteBounds) -> Result<Vec<Config>> {
    let mut configs = Vec::new();
    for theory in [Theory::KTheory, Theory::Mod2] {
        let kinds: Vec<OpKind> = match theory {
            Theory::KTheory => bounds.ks.iter().map(|&k| OpKind::Psi(k)).collect(),
            Theory::Mod2 => vec![OpKind::Sq],
        };
        for space in suite_spaces(theory, bounds)? {
            for bundle in suite_bundles(space.factors().len(), bounds.max_summands) {
                for &kind in &kinds {
                    configs.push(Config {
                        space: space.clone(),
                        bundle: bundle.clone(),
                        kind,
                    });
                }
            }
        }
    }
    Ok(configs)
}

/// The canonical restriction of the extended ring back to the base: every
/// shared generator maps to itself, generators the base lacks map to 0.
fn restriction_to_base(td: &ThomData) -> Result<RingMap> {
    let images = td
        .extended()
        .generators()
        .iter()
        .map(|g| match td.base().generator_index(&g.name) {
            Some(idx) => GradedElement::generator(td.base(), idx),
            None => GradedElement::zero(td.base()),
        })
        .collect();
    RingMap::new(td.extended(), td.base(), images)
}

/// The named check families the suite runs, in order.
pub const SUITE_CHECKS: &[&str] = &[
    "kernel-laws",
    "operation-axioms",
    "eqm",
    "thom-module-iso",
    "composite-module-map",
    "sum-formula",
    "product-formula-signed",
    "naturality",
    "permutation-invariance",
];

fn family_kernel_laws(bounds: &SuiteBounds, _allow: bool) -> Result<VerificationReport> {
    let mut rings: BTreeMap<String, Arc<RingSpec>> = BTreeMap::new();
    for config in &suite_configs(bounds)? {
        let td = build_thom_model(&config.space, &config.bundle)?;
        for ring in [td.base(), td.extended()] {
            rings.entry(ring.describe()).or_insert_with(|| Arc::clone(ring));
        }
    }
    let mut ch = Checker::new("kernel-laws");
    for (describe, ring) in &rings {
        if ring.basis().len() <= 64 {
            kernel_cases(&mut ch, describe, ring)?;
        }
    }
    Ok(ch.report())
}

fn family_operation_axioms(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    let mut ch = Checker::new("operation-axioms");
    let mut seen = std::collections::BTreeSet::new();
    for config in &suite_configs(bounds)? {
        let td = build_thom_model(&config.space, &config.bundle)?;
        for ring in [td.base(), td.extended()] {
            if ring.basis().len() > 64 {
                continue;
            }
            let key = format!("{} | {}", ring.describe(), config.kind);
            if !seen.insert(key) {
                continue;
            }
            let op = config.kind.build(ring, allow)?;
            let prefix = format!("{} on {}", op.label(), ring.describe());
            map_axiom_cases(&mut ch, &prefix, ring, &|e| op.apply(e))?;
        }
    }
    Ok(ch.report())
}

fn family_per_config(
    name: &str,
    bounds: &SuiteBounds,
    allow: bool,
    run: impl Fn(&mut Checker, &str, &ThomData, &Operation, &Operation) -> Result<()>,
) -> Result<VerificationReport> {
    let mut ch = Checker::new(name);
    for config in &suite_configs(bounds)? {
        let td = build_thom_model(&config.space, &config.bundle)?;
        let ext_op = config.kind.build(td.extended(), allow)?;
        let base_op = config.kind.build(td.base(), allow)?;
        let prefix = format!("{}, {}", config.kind, td.label());
        run(&mut ch, &prefix, &td, &base_op, &ext_op)?;
    }
    Ok(ch.report())
}

fn family_eqm(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    family_per_config("eqm", bounds, allow, |ch, prefix, td, _base, ext| {
        eqm_cases(ch, prefix, td, ext)
    })
}

fn family_thom_module_iso(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    family_per_config("thom-module-iso", bounds, allow, |ch, prefix, td, base, ext| {
        iso_cases(ch, prefix, td, base, ext, None)
    })
}

fn family_composite_module_map(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    family_per_config(
        "composite-module-map",
        bounds,
        allow,
        |ch, prefix, td, base, ext| {
            let g = restriction_to_base(td)?;
            composite_cases(ch, prefix, td, base, ext, &g, base)
        },
    )
}

fn family_sum_formula(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    let mut ch = Checker::new("sum-formula");
    for theory in [Theory::KTheory, Theory::Mod2] {
        let kinds: Vec<OpKind> = match theory {
            Theory::KTheory => bounds.ks.iter().map(|&k| OpKind::Psi(k)).collect(),
            Theory::Mod2 => vec![OpKind::Sq],
        };
        for space in suite_spaces(theory, bounds)? {
            let bundles = suite_bundles(space.factors().len(), bounds.max_summands.max(1) - 1);
            for b1 in &bundles {
                for b2 in &bundles {
                    if b1.rank() + b2.rank() > bounds.max_summands {
                        continue;
                    }
                    for &kind in &kinds {
                        let prefix = format!("{kind} on ({b1}) + ({b2}) over {space}");
                        sum_formula_cases(&mut ch, &prefix, &space, b1, b2, kind, allow)?;
                    }
                }
            }
        }
    }
    Ok(ch.report())
}

fn family_product_formula(_bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    let mut ch = Checker::new("product-formula-signed");
    let (td1, op1, td2, op2) = builtin_exterior_instance()?;
    product_signed_cases(&mut ch, "formal exterior instance", &td1, &op1, &td2, &op2, true)?;
    {
        let space = SpaceModel::new(vec![Factor::new(FactorKind::CP, 1)], Theory::KTheory)?;
        let bundle = BundleDescriptor::new(vec![0])?;
        let td = build_thom_model(&space, &bundle)?;
        let op = OpKind::Psi(2).build(td.extended(), allow)?;
        product_signed_cases(&mut ch, "K-theory instance", &td, &op, &td, &op, true)?;
    }
    {
        let space = SpaceModel::new(vec![Factor::new(FactorKind::RP, 2)], Theory::Mod2)?;
        let bundle = BundleDescriptor::new(vec![0])?;
        let td = build_thom_model(&space, &bundle)?;
        let op = OpKind::Sq.build(td.extended(), allow)?;
        product_signed_cases(&mut ch, "mod-2 instance", &td, &op, &td, &op, true)?;
    }
    Ok(ch.report())
}

fn family_naturality(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    let mut ch = Checker::new("naturality");
    for theory in [Theory::KTheory, Theory::Mod2] {
        let kinds: Vec<OpKind> = match theory {
            Theory::KTheory => bounds.ks.iter().map(|&k| OpKind::Psi(k)).collect(),
            Theory::Mod2 => vec![OpKind::Sq],
        };
        let factor_kind = match theory {
            Theory::Mod2 => FactorKind::RP,
            Theory::KTheory => FactorKind::CP,
        };
        // truncation restrictions
        for n in 1..=bounds.max_n {
            for m in 0..n {
                let from = SpaceModel::new(vec![Factor::new(factor_kind, n)], theory)?;
                let to = SpaceModel::new(vec![Factor::new(factor_kind, m)], theory)?;
                for rank in 1..=bounds.max_summands {
                    let bundle = BundleDescriptor::new(vec![0; rank])?;
                    for &kind in &kinds {
                        let prefix = format!("{kind}, {bundle} restricted from {from} to {to}");
                        naturality_cases(&mut ch, &prefix, &from, &bundle, &to, &[0], kind, allow)?;
                    }
                }
            }
        }
        // projections: pull a single-factor bundle back to a two-factor space
        if bounds.max_factors >= 2 {
            for n in 0..=bounds.max_n {
                for m in 0..=bounds.max_n {
                    let from = SpaceModel::new(vec![Factor::new(factor_kind, n)], theory)?;
                    let to = SpaceModel::new(
                        vec![Factor::new(factor_kind, n), Factor::new(factor_kind, m)],
                        theory,
                    )?;
                    let bundle = BundleDescriptor::new(vec![0])?;
                    for &kind in &kinds {
                        let prefix = format!(
                            "{kind}, {bundle} pulled back along the projection {to} -> {from}"
                        );
                        naturality_cases(&mut ch, &prefix, &from, &bundle, &to, &[0], kind, allow)?;
                    }
                }
            }
        }
    }
    Ok(ch.report())
}

fn family_permutation_invariance(bounds: &SuiteBounds, allow: bool) -> Result<VerificationReport> {
    let mut ch = Checker::new("permutation-invariance");
    for config in &suite_configs(bounds)? {
        if config.bundle.rank() < 2 {
            continue;
        }
        let prefix = format!("{}, {} over {}", config.kind, config.bundle, config.space);
        permutation_cases(&mut ch, &prefix, &config.space, &config.bundle, config.kind, allow)?;
    }
    Ok(ch.report())
}

/// Runs one named check family at the given bounds.
pub fn run_named_check(
    name: &str,
    bounds: &SuiteBounds,
    allow_degenerate: bool,
) -> Result<VerificationReport> {
    match name {
        "kernel-laws" => family_kernel_laws(bounds, allow_degenerate),
        "operation-axioms" => family_operation_axioms(bounds, allow_degenerate),
        "eqm" => family_eqm(bounds, allow_degenerate),
        "thom-module-iso" => family_thom_module_iso(bounds, allow_degenerate),
        "composite-module-map" => family_composite_module_map(bounds, allow_degenerate),
        "sum-formula" => family_sum_formula(bounds, allow_degenerate),
        "product-formula-signed" => family_product_formula(bounds, allow_degenerate),
        "naturality" => family_naturality(bounds, allow_degenerate),
        "permutation-invariance" => family_permutation_invariance(bounds, allow_degenerate),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

/// Runs every check family at the given bounds and returns one aggregated
/// report per family.
pub fn suite(bounds: &SuiteBounds, allow_degenerate: bool) -> Result<Vec<VerificationReport>> {
    SUITE_CHECKS
        .iter()
        .map(|name| run_named_check(name, bounds, allow_degenerate))
        .collect()
}

/// Number of (space, bundle, operation) configurations the suite sweeps
/// at the given bounds.
pub fn suite_config_count(bounds: &SuiteBounds) -> Result<usize> {
    Ok(suite_configs(bounds)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{adams, total_sq};
    use crate::ring::Coefficients;

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
    fn eqm_passes_on_examples() {
        let td = build_thom_model(&cp_space(2), &line()).unwrap();
        let psi2 = adams(td.extended(), 2, false).unwrap();
        let report = check_eqm(&td, &psi2).unwrap();
        assert!(report.passed());
        assert_eq!(report.cases, 3);

        let td2 = build_thom_model(&rp_space(2), &line()).unwrap();
        let sq = total_sq(td2.extended()).unwrap();
        assert!(check_eqm(&td2, &sq).unwrap().passed());
    }

    #[test]
    fn eqm_formal_identity_has_unit_twist() {
        let td = build_thom_model(&cp_space(2), &line()).unwrap();
        let identity = adams(td.extended(), 1, false).unwrap();
        assert!(td.rho(&identity).unwrap().is_one());
        assert!(check_eqm(&td, &identity).unwrap().passed());
    }

    #[test]
    fn module_iso_passes_and_perturbed_twist_fails() {
        let td = build_thom_model(&cp_space(3), &line()).unwrap();
        let ext_op = adams(td.extended(), 3, false).unwrap();
        let base_op = adams(td.base(), 3, false).unwrap();
        assert!(check_thom_module_iso(&td, &base_op, &ext_op).unwrap().passed());

        let rho = td.rho(&ext_op).unwrap();
        let wrong = rho.add(&GradedElement::one(td.base())).unwrap();
        let report = check_thom_module_iso_with_twist(&td, &base_op, &ext_op, &wrong).unwrap();
        assert!(!report.passed());
        let cex = report.counterexample.unwrap();
        assert!(cex.case.contains("a = 1"), "witness should be a = 1: {}", cex.case);
    }

    #[test]
    fn module_iso_mod2() {
        let td = build_thom_model(&rp_space(3), &line()).unwrap();
        let ext_op = total_sq(td.extended()).unwrap();
        let base_op = total_sq(td.base()).unwrap();
        assert!(check_thom_module_iso(&td, &base_op, &ext_op).unwrap().passed());
    }

    #[test]
    fn composite_module_map_with_restriction() {
        let td = build_thom_model(&cp_space(3), &line()).unwrap();
        let ext_op = adams(td.extended(), 2, false).unwrap();
        let base_op = adams(td.base(), 2, false).unwrap();
        let g = restriction_to_base(&td).unwrap();
        let report =
            check_composite_module_map(&td, &base_op, &ext_op, &g, &base_op).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn composite_module_map_rejects_non_commuting() {
        // x |-> x^2 is a ring map on K(CP^4) but does not commute with psi^2
        let td = build_thom_model(&cp_space(3), &line()).unwrap();
        let ext = td.extended();
        let ext_op = adams(ext, 2, false).unwrap();
        let base_op = adams(td.base(), 2, false).unwrap();
        let x_sq = GradedElement::generator(ext, 0).pow(2);
        let g = RingMap::new(ext, ext, vec![x_sq]).unwrap();
        let target_op = ext_op.clone();
        let err = check_composite_module_map(&td, &base_op, &ext_op, &g, &target_op);
        assert!(matches!(err, Err(Error::NotCommuting(_))));
    }

    #[test]
    fn sum_formula_examples() {
        let report = check_sum_formula(&cp_space(2), &line(), &line(), OpKind::Psi(2), false)
            .unwrap();
        assert!(report.passed());

        let rp_prod = SpaceModel::new(
            vec![Factor::new(FactorKind::RP, 2), Factor::new(FactorKind::RP, 2)],
            Theory::Mod2,
        )
        .unwrap();
        let b1 = BundleDescriptor::new(vec![0]).unwrap();
        let b2 = BundleDescriptor::new(vec![1]).unwrap();
        assert!(check_sum_formula(&rp_prod, &b1, &b2, OpKind::Sq, false).unwrap().passed());
    }

    #[test]
    fn product_formula_builtin_instance() {
        let (td1, op1, td2, op2) = builtin_exterior_instance().unwrap();
        // the oracle twist of the external product is 1 + s - t - s*t
        let prod = external_thom_product(&td1, &td2).unwrap();
        let op = external_operation(&prod, &op1, &op2).unwrap();
        let rho = prod.data.rho(&op).unwrap();
        assert_eq!(rho.to_string(), "1 + s - t - s*t");

        let report = check_product_formula_signed(&td1, &op1, &td2, &op2, true).unwrap();
        assert!(report.passed());

        // dropping the sign breaks exactly the degree-1 slice
        let dropped = check_product_formula_signed(&td1, &op1, &td2, &op2, false).unwrap();
        assert!(!dropped.passed());
        let cex = dropped.counterexample.unwrap();
        assert!(cex.case.contains("degree 1"), "{}", cex.case);
    }

    #[test]
    fn product_formula_even_degree_needs_no_sign() {
        let space = cp_space(1);
        let td = build_thom_model(&space, &line()).unwrap();
        let op = adams(td.extended(), 2, false).unwrap();
        assert!(check_product_formula_signed(&td, &op, &td, &op, true).unwrap().passed());
        // signs never fire for |u| = 0, so dropping them changes nothing
        assert!(check_product_formula_signed(&td, &op, &td, &op, false).unwrap().passed());
    }

    #[test]
    fn naturality_examples() {
        // CP^2 inside CP^4
        let report = check_naturality(
            &cp_space(4),
            &line(),
            &cp_space(2),
            &[0],
            OpKind::Psi(3),
            false,
        )
        .unwrap();
        assert!(report.passed());

        // RP^1 inside RP^3
        let report = check_naturality(
            &rp_space(3),
            &line(),
            &rp_space(1),
            &[0],
            OpKind::Sq,
            false,
        )
        .unwrap();
        assert!(report.passed());

        // projection CP^2 x CP^1 -> CP^2
        let product = SpaceModel::new(
            vec![Factor::new(FactorKind::CP, 2), Factor::new(FactorKind::CP, 1)],
            Theory::KTheory,
        )
        .unwrap();
        let report = check_naturality(
            &cp_space(2),
            &line(),
            &product,
            &[0],
            OpKind::Psi(2),
            false,
        )
        .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn operation_axioms_pass_and_negative_control_fails() {
        let ring = RingSpec::new(
            Coefficients::Integer,
            vec![GeneratorSpec::polynomial("x", 0, 3)],
        )
        .unwrap();
        let psi2 = adams(&ring, 2, false).unwrap();
        assert!(check_operation_axioms(&psi2).unwrap().passed());

        // term-wise map x -> x, x^2 -> 0, x^3 -> 0 bypassing extension is
        // not multiplicative
        let broken = |e: &GradedElement| -> Result<GradedElement> {
            GradedElement::from_terms(
                e.ring(),
                e.terms().filter_map(|(m, c)| {
                    if m.exponents()[0] <= 1 {
                        Some((m.clone(), c.clone()))
                    } else {
                        None
                    }
                }),
            )
        };
        let report = check_map_axioms(&ring, "truncate-to-linear", &broken).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn permutation_invariance_small() {
        let space = SpaceModel::new(
            vec![Factor::new(FactorKind::CP, 2), Factor::new(FactorKind::CP, 1)],
            Theory::KTheory,
        )
        .unwrap();
        let bundle = BundleDescriptor::new(vec![0, 1, 0]).unwrap();
        let report =
            check_permutation_invariance(&space, &bundle, OpKind::Psi(2), false).unwrap();
        assert!(report.passed());
        assert_eq!(report.cases, 3); // distinct orderings of {0, 0, 1}
    }

    #[test]
    fn kernel_laws_on_sample_rings() {
        let exterior = RingSpec::new(
            Coefficients::Integer,
            vec![
                GeneratorSpec::exterior("s", 1),
                GeneratorSpec::exterior("u", 1),
                GeneratorSpec::polynomial("y", 2, 2),
            ],
        )
        .unwrap();
        assert!(check_kernel_laws(&exterior).unwrap().passed());
    }

    #[test]
    fn twisted_action_is_additive() {
        let ring = RingSpec::new(
            Coefficients::Integer,
            vec![GeneratorSpec::polynomial("x", 0, 3)],
        )
        .unwrap();
        let op = adams(&ring, 2, false).unwrap();
        let twist = GradedElement::scalar(&ring, 2)
            .add(&GradedElement::generator(&ring, 0))
            .unwrap();
        let action = TwistedAction::new(op, twist).unwrap();
        for m in ring.basis() {
            for n in ring.basis() {
                let a = basis_element(&ring, m);
                let b = basis_element(&ring, n);
                assert_eq!(
                    action.apply(&a.add(&b).unwrap()).unwrap(),
                    action.apply(&a).unwrap().add(&action.apply(&b).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn uniqueness_of_the_twist_in_the_window() {
        // two window elements with the same product against u coincide
        let td = build_thom_model(&cp_space(3), &line()).unwrap();
        let psi2 = adams(td.extended(), 2, false).unwrap();
        let rho = td.rho(&psi2).unwrap();
        for m in td.base().basis() {
            let other = rho.add(&basis_element(td.base(), m)).unwrap();
            if other == rho {
                continue;
            }
            assert_ne!(td.times_u(&other).unwrap(), td.times_u(&rho).unwrap());
        }
    }

    #[test]
    fn report_serializes_to_schema() {
        let td = build_thom_model(&cp_space(1), &line()).unwrap();
        let psi2 = adams(td.extended(), 2, false).unwrap();
        let report = check_eqm(&td, &psi2).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["check"], "eqm");
        assert_eq!(json["status"], "pass");
        assert!(json["cases"].as_u64().unwrap() >= 1);
        assert!(json["counterexample"].is_null());
    }
}
