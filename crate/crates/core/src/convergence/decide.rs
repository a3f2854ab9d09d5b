use alloc::{boxed::Box, format, string::String, sync::Arc, vec::Vec};
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{
    family::{Leaf, Located, Shape},
    Check, ConvergenceVerdict, Divergence, Element, EvidenceRow, GapCase, IndexPattern, Limit, LimitTarget,
    Proposition, SequenceFamily, Side, Verdict,
};
use crate::{
    geometry::{cylinder, rational_from, Position},
    DigitRule, DigitStream, Error, PrefixBase, Rational, Representation, Result,
};

/// Deepest enclosure used when refining evidence.
const MAX_DEPTH: usize = 4096;
/// How far past a bounded disagreement index to look for a strictly inner cylinder.
const INNER_SEARCH: usize = 512;

struct Ctx<'a> {
    kind: Representation,
    target: &'a LimitTarget,
    prop: Proposition,
    reference: Option<DigitStream>,
    x0: Option<Rational>,
}

enum Rule {
    /// `diam Δ(c₁…c_{kₙ−1})` of the target's own cylinders.
    DiamBeforeDisagreement,
    /// `numerator / (d − 1)` with `d` the element's digit at `position`.
    DigitTail { position: usize, numerator: Rational },
}

enum Outcome {
    Converges(Rule),
    Diverges(Divergence),
    Undetermined(String),
}

enum Plan {
    Leaf(Outcome),
    Pair(Box<Plan>, Box<Plan>),
    Explicit(usize),
}

pub fn decide(
    kind: Representation,
    system: &Arc<DigitRule>,
    target: &LimitTarget,
    family: &SequenceFamily,
    samples: &[u64],
) -> Result<ConvergenceVerdict> {
    let prop = target.classify(kind, system)?;
    family.check_system(system)?;
    let empty = PrefixBase::empty(system.clone());
    let shape = family.shape(&empty)?;
    let ctx = Ctx {
        kind,
        target,
        prop,
        reference: target.reference(),
        x0: target.exact(kind),
    };
    let plan = analyze(&ctx, &shape)?;
    let verdict = combine(&plan);
    let evidence = evidence(&ctx, &shape, &plan, &verdict, samples)?;
    Ok(ConvergenceVerdict {
        proposition: prop,
        verdict,
        evidence,
    })
}

pub fn decide_p(
    system: &Arc<DigitRule>,
    target: &LimitTarget,
    family: &SequenceFamily,
    samples: &[u64],
) -> Result<ConvergenceVerdict> {
    decide(Representation::Positive, system, target, family, samples)
}

pub fn decide_pminus(
    system: &Arc<DigitRule>,
    target: &LimitTarget,
    family: &SequenceFamily,
    samples: &[u64],
) -> Result<ConvergenceVerdict> {
    decide(Representation::Alternating, system, target, family, samples)
}

pub fn decide_zero(
    kind: Representation,
    system: &Arc<DigitRule>,
    family: &SequenceFamily,
    samples: &[u64],
) -> Result<ConvergenceVerdict> {
    decide(kind, system, &LimitTarget::Zero, family, samples)
}

/// Smallest position where the two streams differ.
pub fn disagreement_index(x0: &DigitStream, x: &DigitStream, max_depth: usize) -> Result<usize> {
    let mut a = PrefixBase::empty(x0.prefix().system().clone());
    let mut b = PrefixBase::empty(x.prefix().system().clone());
    for i in 1..=max_depth {
        x0.extend(&mut a, i)?;
        x.extend(&mut b, i)?;
        if a.digits()[i - 1] != b.digits()[i - 1] {
            return Ok(i);
        }
    }
    Err(Error::NoDisagreementUpToDepth(max_depth))
}

/// Exact `|xₙ − x₀|` for each sampled `n`.
pub fn oracle_distance_profile(
    kind: Representation,
    system: &Arc<DigitRule>,
    target: &LimitTarget,
    family: &SequenceFamily,
    samples: &[u64],
) -> Result<Vec<(u64, Rational)>> {
    target.classify(kind, system)?;
    family.check_system(system)?;
    let x0 = target.exact(kind).ok_or(Error::NotExactlyEvaluable { index: 0 })?;
    let reference = target.reference();
    samples
        .iter()
        .map(|&n| {
            let x = family
                .element(system, reference.as_ref(), n)?
                .exact(kind)
                .ok_or(Error::NotExactlyEvaluable { index: n })?;
            Ok((n, (x - &x0).abs()))
        })
        .collect()
}

fn analyze(ctx: &Ctx, shape: &Shape) -> Result<Plan> {
    Ok(match shape {
        Shape::Leaf(leaf) => Plan::Leaf(analyze_leaf(ctx, leaf)?),
        Shape::Interleave(a, b) => Plan::Pair(Box::new(analyze(ctx, a)?), Box::new(analyze(ctx, b)?)),
        Shape::Explicit(list) => Plan::Explicit(list.len()),
    })
}

fn combine(plan: &Plan) -> Verdict {
    match plan {
        Plan::Leaf(Outcome::Converges(_)) => Verdict::Converges,
        Plan::Leaf(Outcome::Diverges(d)) => Verdict::Diverges(d.clone()),
        Plan::Leaf(Outcome::Undetermined(why)) => Verdict::Undetermined(why.clone()),
        Plan::Pair(a, b) => match (combine(a), combine(b)) {
            (Verdict::Diverges(d), _) => Verdict::Diverges(Divergence {
                pattern: d.pattern.on_odd(),
                ..d
            }),
            (_, Verdict::Diverges(d)) => Verdict::Diverges(Divergence {
                pattern: d.pattern.on_even(),
                ..d
            }),
            (Verdict::Undetermined(why), _) | (_, Verdict::Undetermined(why)) => Verdict::Undetermined(why),
            _ => Verdict::Converges,
        },
        Plan::Explicit(len) => Verdict::Undetermined(format!(
            "a finite list of {len} elements says nothing about the limit"
        )),
    }
}

fn outcome_at(plan: &Plan, n: u64) -> Option<&Outcome> {
    match plan {
        Plan::Leaf(o) => Some(o),
        Plan::Pair(a, b) => {
            if n % 2 == 1 {
                outcome_at(a, (n + 1) / 2)
            } else {
                outcome_at(b, n / 2)
            }
        }
        Plan::Explicit(_) => None,
    }
}

fn analyze_leaf(ctx: &Ctx, leaf: &Leaf) -> Result<Outcome> {
    if let Leaf::Prefixed { base, g, .. } = leaf {
        let min = base.min_next_digit();
        if BigUint::from(g.min_value()) < min {
            return Err(Error::InvalidDigit {
                index: base.rank() + 1,
                digit: g.min_value().into(),
                minimum: min,
            });
        }
    }
    match ctx.prop {
        Proposition::PZero | Proposition::PmZero => zero_leaf(leaf),
        Proposition::PRightInfimum | Proposition::PmLeftOddSupremum | Proposition::PmRightEvenInfimum => {
            prefix_leaf(ctx, leaf)
        }
        _ => stream_leaf(ctx, leaf),
    }
}

/// The largest recurring value, with every index on which some recurring
/// value is taken.
fn largest(entries: Vec<(u64, IndexPattern)>) -> (u64, IndexPattern) {
    let mut entries = entries.into_iter();
    let (mut v, mut pattern) = entries.next().expect("bounded maps recur on some value");
    for (w, p) in entries {
        v = v.max(w);
        pattern = pattern.union(&p);
    }
    (v, pattern)
}

fn digit_case(position: usize, digit: impl Into<BigUint>) -> GapCase {
    GapCase::BoundedDigit {
        position,
        digit: digit.into(),
    }
}

fn zero_leaf(leaf: &Leaf) -> Result<Outcome> {
    let Leaf::Prefixed { base, g, .. } = leaf else {
        return Err(Error::UnsupportedFamily(
            "disagreement families need a digit-stream target".into(),
        ));
    };
    let r0 = rational_from(base.r(0));
    let n0 = leaf.n0();
    if base.is_empty() {
        return Ok(match g.limit() {
            Limit::Infinite => Outcome::Converges(Rule::DigitTail {
                position: 1,
                numerator: r0,
            }),
            Limit::Recurring(entries) => {
                let (v, pattern) = largest(entries);
                Outcome::Diverges(Divergence {
                    gap: r0 / Rational::from_integer(v.into()),
                    pattern: pattern.starting_at(n0),
                    case: digit_case(1, v),
                })
            }
        });
    }
    let d = base.digits()[0].clone();
    Ok(Outcome::Diverges(Divergence {
        gap: r0 / rational_from(&d),
        pattern: IndexPattern::all_from(n0),
        case: digit_case(1, d),
    }))
}

fn prefix_leaf(ctx: &Ctx, leaf: &Leaf) -> Result<Outcome> {
    let Leaf::Prefixed { base, g, .. } = leaf else {
        return Err(Error::UnsupportedFamily(
            "disagreement families need a digit-stream target".into(),
        ));
    };
    let target = ctx.target.base().expect("prefix targets carry a base");
    let side = ctx.target.side().expect("prefix targets are one-sided");
    check_prefixed_side(ctx, leaf, side)?;
    let (k, m) = (target.rank(), base.rank());
    let geo = cylinder(target, ctx.kind);
    let numerator = &geo.diam * rational_from(target.r_value());
    let n0 = leaf.n0();
    if m >= k && base.digits()[..k] == *target.digits() {
        if m == k {
            return Ok(match g.limit() {
                Limit::Infinite => Outcome::Converges(Rule::DigitTail {
                    position: k + 1,
                    numerator,
                }),
                Limit::Recurring(entries) => {
                    let (v, pattern) = largest(entries);
                    Outcome::Diverges(Divergence {
                        gap: numerator / Rational::from_integer(v.into()),
                        pattern: pattern.starting_at(n0),
                        case: digit_case(k + 1, v),
                    })
                }
            });
        }
        let d = base.digits()[k].clone();
        return Ok(Outcome::Diverges(Divergence {
            gap: numerator / rational_from(&d),
            pattern: IndexPattern::all_from(n0),
            case: digit_case(k + 1, d),
        }));
    }
    if m < k && base.digits() == &target.digits()[..m] {
        // Elements whose parameter matches the target digit could still enter
        // the target cylinder through their tail.
        if let Some(d) = target.digits()[m].to_u64() {
            if g.takes_value(d) && leaf.element_for(d, None)?.take(k)? == *target {
                return Err(Error::UnsupportedFamily(
                    "some elements enter the target cylinder only through their tail".into(),
                ));
            }
        }
    }
    Ok(Outcome::Diverges(Divergence {
        gap: geo.diam,
        pattern: IndexPattern::all_from(n0),
        case: GapCase::Separated {
            cylinder: target.clone(),
        },
    }))
}

fn stream_leaf(ctx: &Ctx, leaf: &Leaf) -> Result<Outcome> {
    let reference = ctx.reference.as_ref().expect("stream targets carry digits");
    let one_sided = ctx.target.side();
    match leaf {
        Leaf::Deviate { k, deviation, .. } => {
            if one_sided == Some(Side::Left) && matches!(deviation, super::Deviation::Decrease(_)) {
                return Err(Error::SideMismatch(
                    "a smaller digit puts the element right of the target".into(),
                ));
            }
            match k.limit() {
                Limit::Infinite => Ok(Outcome::Converges(Rule::DiamBeforeDisagreement)),
                Limit::Recurring(entries) => {
                    if ctx.prop == Proposition::PSufficiency {
                        return repeated_element(ctx, leaf, entries);
                    }
                    let (v, pattern) = largest(entries);
                    let (gap, cylinder) = separation_gap(ctx, reference, v as usize)?;
                    Ok(Outcome::Diverges(Divergence {
                        gap,
                        pattern,
                        case: GapCase::Separated { cylinder },
                    }))
                }
            }
        }
        Leaf::Prefixed { g, .. } => {
            if let Some(side) = one_sided {
                check_prefixed_side(ctx, leaf, side)?;
            }
            let bound = prefixed_disagreement_bound(leaf, reference)?;
            if ctx.prop == Proposition::PSufficiency {
                return match g.limit() {
                    Limit::Recurring(entries) => repeated_element(ctx, leaf, entries),
                    Limit::Infinite => Ok(Outcome::Undetermined(format!(
                        "the disagreement index stays at most {bound} while the elements keep changing; \
                         the sufficient criterion does not decide this"
                    ))),
                };
            }
            let (gap, cylinder) = separation_gap(ctx, reference, bound)?;
            Ok(Outcome::Diverges(Divergence {
                gap,
                pattern: IndexPattern::all_from(leaf.n0()),
                case: GapCase::Separated { cylinder },
            }))
        }
    }
}

/// Upper bound on `kₙ` valid for every element of a prefixed leaf.
fn prefixed_disagreement_bound(leaf: &Leaf, reference: &DigitStream) -> Result<usize> {
    let Leaf::Prefixed { base, g, .. } = leaf else {
        unreachable!("only prefixed leaves have a structural bound")
    };
    let m = base.rank();
    let x = reference.take(m + 1)?;
    if let Some(j) = (0..m).find(|&i| base.digits()[i] != x.digits()[i]) {
        return Ok(j + 1);
    }
    let mut bound = m + 1;
    if let Some(d) = x.digits()[m].to_u64() {
        if g.takes_value(d) {
            let e = leaf.element_for(d, None)?;
            match disagreement_index(reference, &e, m + 1 + INNER_SEARCH) {
                Ok(j) => bound = bound.max(j),
                Err(Error::NoDisagreementUpToDepth(_)) => {
                    let index = (1..=1 << 16).find(|&n| g.eval(n) == d).unwrap_or(0);
                    return Err(Error::ElementEqualsTarget { index });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(bound)
}

/// Distance from `x₀` to the complement of its rank-`k` cylinder on the
/// approach side, or a positive lower bound for it.
fn separation_gap(ctx: &Ctx, reference: &DigitStream, k: usize) -> Result<(Rational, PrefixBase)> {
    let base = reference.take(k)?;
    let outer = cylinder(&base, ctx.kind);
    if let Some(x0) = &ctx.x0 {
        let gap = if ctx.prop == Proposition::PLeftSupremum {
            x0 - &outer.inf
        } else {
            (x0 - &outer.inf).min(&outer.sup - x0)
        };
        if gap.is_positive() {
            return Ok((gap, base));
        }
        return Err(Error::UnsupportedFamily(format!(
            "the target is an endpoint of its rank-{k} cylinder"
        )));
    }
    for depth in k + 1..=k + INNER_SEARCH {
        let inner = cylinder(&reference.take(depth)?, ctx.kind);
        if inner.inf > outer.inf && inner.sup < outer.sup {
            let gap = (&inner.inf - &outer.inf).min(&outer.sup - &inner.sup);
            return Ok((gap, base));
        }
    }
    Err(Error::Undetermined {
        depth: k + INNER_SEARCH,
    })
}

/// Divergence from a bounded parameter: the element for a recurring value
/// differs from `x₀` and appears infinitely often.
fn repeated_element(ctx: &Ctx, leaf: &Leaf, entries: Vec<(u64, IndexPattern)>) -> Result<Outcome> {
    let mut best: Option<(Rational, u64)> = None;
    let mut pattern: Option<IndexPattern> = None;
    for (v, p) in entries {
        let gap = element_distance(ctx, leaf, v)?;
        if best.as_ref().map_or(true, |(g, _)| &gap < g) {
            best = Some((gap, v));
        }
        pattern = Some(match pattern {
            Some(q) => q.union(&p),
            None => p,
        });
    }
    let ((gap, v), pattern) = best.zip(pattern).expect("bounded maps recur on some value");
    Ok(Outcome::Diverges(Divergence {
        gap,
        pattern: pattern.starting_at(leaf.n0()),
        case: GapCase::RepeatedElement { parameter: v },
    }))
}

/// A positive lower bound on the distance from the element for parameter
/// `v` to `x₀`.
fn element_distance(ctx: &Ctx, leaf: &Leaf, v: u64) -> Result<Rational> {
    let element = Element::Stream(leaf.element_for(v, ctx.reference.as_ref())?);
    let mut depth = element.structural_rank() + 8;
    loop {
        let (lo, _) = element
            .enclosure(ctx.kind, depth)?
            .distance_bounds(&ctx.target.enclosure(ctx.kind, depth)?);
        if lo.is_positive() {
            return Ok(lo);
        }
        if element.exact(ctx.kind).is_some() && ctx.x0.is_some() {
            let index = (1..=1 << 16).find(|&n| leaf.map().eval(n) == v).unwrap_or(0);
            return Err(Error::ElementEqualsTarget { index });
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Undetermined { depth });
        }
        depth *= 2;
    }
}

fn side_of_element(ctx: &Ctx, element: &Element, x0: &Rational, n: u64) -> Result<Side> {
    let mut depth = element.structural_rank() + 8;
    loop {
        match element.enclosure(ctx.kind, depth)?.compare_to(x0) {
            Some(Ordering::Less) => return Ok(Side::Left),
            Some(Ordering::Greater) => return Ok(Side::Right),
            Some(Ordering::Equal) => return Err(Error::ElementEqualsTarget { index: n }),
            None if depth >= MAX_DEPTH => return Err(Error::Undetermined { depth }),
            None => depth *= 2,
        }
    }
}

fn mismatch(side: Side) -> Error {
    Error::SideMismatch(format!(
        "elements must stay {} of the target",
        match side {
            Side::Left => "left",
            Side::Right => "right",
        }
    ))
}

/// Checks that every element of a prefixed leaf lies on `side` of `x₀`.
///
/// Children of `Δ(base)` are ordered monotonically by their digit, so the
/// parameter values on each side form a ray, with at most one boundary value
/// whose side depends on the tail.
fn check_prefixed_side(ctx: &Ctx, leaf: &Leaf, side: Side) -> Result<()> {
    let Leaf::Prefixed { base, g, early, .. } = leaf else {
        unreachable!("only prefixed leaves are checked structurally")
    };
    let x0 = ctx.x0.as_ref().expect("one-sided targets are exact");
    for (i, s) in early.iter().enumerate() {
        if side_of_element(ctx, &Element::Stream(s.clone()), x0, i as u64 + 1)? != side {
            return Err(mismatch(side));
        }
    }
    let pos = Position::of(base, ctx.kind);
    let (inf, sup) = pos.span();
    let all = if x0 <= &inf {
        Some(Side::Right)
    } else if x0 >= &sup {
        Some(Side::Left)
    } else {
        None
    };
    if let Some(all) = all {
        return if all == side { Ok(()) } else { Err(mismatch(side)) };
    }
    // In remainder coordinates child v occupies (r/v, r/(v−1)).
    let t = pos.remainder_of(x0);
    let a = rational_from(base.r_value()) / t;
    let floor = a.floor().to_integer().to_u64().unwrap_or(u64::MAX - 1);
    let boundary = floor + 1;
    let need_below = (side == Side::Left) != pos.negated;
    let boundary_ok = |v: u64| -> Result<bool> {
        let e = Element::Stream(leaf.element_for(v, None)?);
        let n = (1..=1 << 16).find(|&n| g.eval(n) == v).unwrap_or(0);
        Ok(side_of_element(ctx, &e, x0, n)? == side)
    };
    let ok = if need_below {
        let vmin = g.min_value();
        vmin > boundary || (vmin == boundary && boundary_ok(vmin)?)
    } else {
        match g.max_value() {
            None => false,
            Some(vmax) => vmax < boundary || (vmax == boundary && boundary_ok(vmax)?),
        }
    };
    if ok {
        Ok(())
    } else {
        Err(mismatch(side))
    }
}

fn evidence(
    ctx: &Ctx,
    shape: &Shape,
    plan: &Plan,
    verdict: &Verdict,
    samples: &[u64],
) -> Result<Vec<EvidenceRow>> {
    let indices: Vec<u64> = match shape {
        Shape::Explicit(list) => (1..=list.len() as u64).collect(),
        _ => samples.iter().copied().filter(|&n| n >= 1).collect(),
    };
    let side = ctx.target.side();
    let mut rows = Vec::with_capacity(indices.len());
    for n in indices {
        let (located, i) = shape.locate(n)?;
        let element = shape.element(n, ctx.reference.as_ref())?;
        let check = match (verdict, outcome_at(plan, n), located) {
            (Verdict::Converges, Some(Outcome::Converges(rule)), Located::Leaf(leaf)) if i >= leaf.n0() => {
                Check::Bound(bound_for(ctx, rule, &leaf, i, &element)?)
            }
            (Verdict::Diverges(d), _, _) if d.pattern.contains(n) => Check::Gap(d.gap.clone()),
            _ => Check::Unchecked,
        };
        rows.push(measure(ctx, &element, check, n, side)?);
    }
    Ok(rows)
}

fn bound_for(ctx: &Ctx, rule: &Rule, leaf: &Leaf, i: u64, element: &Element) -> Result<Rational> {
    match rule {
        Rule::DiamBeforeDisagreement => {
            let k = leaf.map().eval(i) as usize;
            let reference = ctx.reference.as_ref().expect("stream targets carry digits");
            Ok(cylinder(&reference.take(k - 1)?, ctx.kind).diam)
        }
        Rule::DigitTail { position, numerator } => {
            let Element::Stream(s) = element else {
                unreachable!("family leaves produce streams")
            };
            let d = s.take(*position)?.digits()[position - 1].clone();
            Ok(numerator / rational_from(&(d - 1u32)))
        }
    }
}

fn measure(ctx: &Ctx, element: &Element, check: Check, n: u64, side: Option<Side>) -> Result<EvidenceRow> {
    let mut depth = element.structural_rank() + 8;
    loop {
        let xi = element.enclosure(ctx.kind, depth)?;
        let ti = ctx.target.enclosure(ctx.kind, depth)?;
        let (lower, upper) = xi.distance_bounds(&ti);
        let exact = xi.is_point() && ti.is_point();
        if exact && lower.is_zero() {
            return Err(Error::ElementEqualsTarget { index: n });
        }
        let side_known = match (side, &ctx.x0) {
            (Some(side), Some(x0)) => match xi.compare_to(x0) {
                Some(Ordering::Less) if side == Side::Left => true,
                Some(Ordering::Greater) if side == Side::Right => true,
                Some(Ordering::Equal) => return Err(Error::ElementEqualsTarget { index: n }),
                Some(_) => return Err(mismatch(side)),
                None => false,
            },
            _ => true,
        };
        let holds = match &check {
            Check::Bound(b) => &upper <= b,
            Check::Gap(g) => &lower >= g,
            Check::Unchecked => true,
        };
        if (holds && side_known) || exact || depth >= MAX_DEPTH {
            return Ok(EvidenceRow {
                n,
                lower,
                upper,
                exact,
                check,
                holds: holds && side_known,
                depth,
            });
        }
        depth *= 2;
    }
}
