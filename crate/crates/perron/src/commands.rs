//! One function per subcommand; each returns the rendered output and exit code.

use std::{path::Path, sync::Arc};

use perron_core::{
    alternating::{self, even_infimum_partner, is_member_is, pm_digits_of, ISResult, PmDigits},
    convergence::{
        decide, decide_two_sided, Check, ConvergenceVerdict, ExplicitElement, GapCase,
        SequenceFamily, Verdict, DEFAULT_SAMPLES,
    },
    geometry::{cylinder, Parity},
    positive::{classify_point, digits_of, stream_of, supremum_as_infimum, PointKind},
    system::BUILTIN_NAMES,
    DigitRule, DigitStream, Generator, PrefixBase, Rational, Representation, Tail,
};

use crate::{
    descriptor::{resolve_system, SystemDescriptor},
    diagram,
    error::{CliError, Exit},
    number::parse_rational,
    output::{join, Field, Format, Record, Style},
    spec::{ConvergenceSpec, Rep, ResolvedTarget, POINT_DEPTH},
};

pub struct Ctx {
    pub system: Option<String>,
    pub rep: Rep,
    pub style: Style,
    pub as_exact: bool,
}

pub type Outcome = Result<(String, Exit), CliError>;

impl Ctx {
    fn system(&self) -> Result<Arc<DigitRule>, CliError> {
        resolve_system(self.system.as_deref().unwrap_or("luroth"))
    }

    fn kind(&self) -> Representation {
        self.rep.kind()
    }

    fn value(&self, text: &str) -> Result<Rational, CliError> {
        parse_rational(text, self.as_exact)
    }

    fn header(&self, system: &DigitRule) -> Record {
        let mut r = Record::new();
        r.text("system", system.name()).text("representation", self.kind().to_string());
        r
    }

    fn done(&self, r: &Record, exit: Exit) -> Outcome {
        Ok((r.render(&self.style), exit))
    }
}

fn push_geometry(r: &mut Record, base: &PrefixBase, kind: Representation) {
    let g = cylinder(base, kind);
    r.number("inf", g.inf).number("sup", g.sup).number("diam", g.diam);
}

fn describe_stream(stream: &DigitStream) -> String {
    let prefix = stream.prefix();
    match stream.tail() {
        Tail::Minimal if prefix.is_empty() => "every digit minimal".to_string(),
        Tail::Minimal => format!("minimal digits after {prefix}"),
        Tail::Generator(Generator::Periodic(block)) if prefix.is_empty() => {
            format!("periodic: ({}) repeated", join(block, ","))
        }
        Tail::Generator(Generator::Periodic(block)) => {
            format!("periodic: {prefix} then ({}) repeated", join(block, ","))
        }
        Tail::Generator(g) => format!("generated: {g:?}"),
        Tail::Unknown => format!("undetermined after {} digits", prefix.rank()),
    }
}

pub fn expand(ctx: &Ctx, x: &str, n: usize) -> Outcome {
    let x = ctx.value(x)?;
    let system = ctx.system()?;
    let mut r = ctx.header(&system);
    r.number("x", x.clone());
    match ctx.rep {
        Rep::P => {
            let base = digits_of(system.clone(), &x, n)?;
            r.push("digits", Field::digits(&base));
            push_geometry(&mut r, &base, Representation::Positive);
            let stream = stream_of(system, &x, n.max(POINT_DEPTH))?;
            r.text("expansion", describe_stream(&stream));
        }
        Rep::Pminus => match pm_digits_of(system.clone(), &x, n)? {
            PmDigits::Regular(base) => {
                r.push("digits", Field::digits(&base));
                push_geometry(&mut r, &base, Representation::Alternating);
                push_membership(&mut r, is_member_is(system, &x, n.max(64))?);
            }
            PmDigits::Member { witness, read } => {
                if !read.is_empty() {
                    r.push("digits", Field::digits(&read));
                }
                r.push("is-member", Field::Text("yes".into()));
                r.push("witness", Field::base(&witness));
                r.number("witness-sup", alternating::pm_sup(&witness));
            }
        },
    }
    ctx.done(&r, Exit::Ok)
}

/// Adds the membership outcome; returns whether it was decided.
fn push_membership(r: &mut Record, result: ISResult) -> bool {
    match result {
        ISResult::Member { witness } => {
            r.text("is-member", "yes");
            r.push("witness", Field::base(&witness));
            r.number("witness-sup", alternating::pm_sup(&witness));
            true
        }
        ISResult::NotMember(cycle) => {
            r.text("is-member", "no");
            r.text("expansion", describe_stream(&cycle.stream()));
            r.push("cycle-start", Field::Integer(cycle.start as u64));
            r.push("cycle-period", Field::Integer(cycle.period as u64));
            true
        }
        ISResult::NotMemberUpToDepth { depth, .. } => {
            r.text("is-member", format!("undetermined: no endpoint and no cycle within {depth} digits"));
            false
        }
    }
}

pub fn cylinder_cmd(ctx: &Ctx, digits: &[num_bigint::BigUint]) -> Outcome {
    let system = ctx.system()?;
    let base = PrefixBase::new(system.clone(), digits.to_vec())?;
    let mut r = ctx.header(&system);
    r.push("base", Field::base(&base));
    r.push("rank", Field::Integer(base.rank() as u64));
    push_geometry(&mut r, &base, ctx.kind());
    if ctx.rep == Rep::Pminus {
        let parity = match Parity::of(base.rank()) {
            Parity::Odd => "odd",
            Parity::Even => "even",
        };
        r.text("parity", parity);
    }
    ctx.done(&r, Exit::Ok)
}

pub fn classify(ctx: &Ctx, x: &str, depth: usize) -> Outcome {
    let x = ctx.value(x)?;
    let system = ctx.system()?;
    let mut r = ctx.header(&system);
    r.number("x", x.clone());
    let exit = match ctx.rep {
        Rep::P => {
            let stream = stream_of(system.clone(), &x, depth)?;
            r.text("expansion", describe_stream(&stream));
            let class = match classify_point(&stream, depth) {
                Ok(c) => c,
                Err(perron_core::Error::Undetermined { depth }) => {
                    r.text("kind", format!("undetermined after {depth} digits"));
                    return ctx.done(&r, Exit::Undetermined);
                }
                Err(e) => return Err(e.into()),
            };
            match class.kind {
                PointKind::Interior { proven: true } => {
                    r.text("kind", "interior");
                    Exit::Ok
                }
                PointKind::Interior { proven: false } => {
                    r.text("kind", format!("interior up to depth {}", class.depth));
                    Exit::Undetermined
                }
                PointKind::One => {
                    r.text("kind", "one");
                    r.text("left-target", "supremum of root");
                    Exit::Ok
                }
                PointKind::CylinderSupremum(w) => {
                    r.text("kind", "endpoint");
                    r.push("supremum-of", Field::base(&w));
                    if let Some(right) = supremum_as_infimum(&w) {
                        r.push("infimum-of", Field::base(&right));
                    }
                    Exit::Ok
                }
            }
        }
        Rep::Pminus => match is_member_is(system.clone(), &x, depth)? {
            ISResult::Member { witness } => {
                r.text("kind", "endpoint");
                r.push("odd-supremum-of", Field::base(&witness));
                if let Some(partner) = even_infimum_partner(&witness) {
                    r.push("even-infimum-of", Field::base(&partner));
                }
                Exit::Ok
            }
            ISResult::NotMember(cycle) => {
                r.text("kind", "regular");
                r.text("expansion", describe_stream(&cycle.stream()));
                Exit::Ok
            }
            ISResult::NotMemberUpToDepth { depth, .. } => {
                r.text("kind", format!("undetermined after {depth} digits"));
                Exit::Undetermined
            }
        },
    };
    ctx.done(&r, exit)
}

pub fn is_member(ctx: &Ctx, x: &str, depth: usize) -> Outcome {
    let x = ctx.value(x)?;
    let system = ctx.system()?;
    let mut r = Record::new();
    r.text("system", system.name()).number("x", x.clone());
    let decided = push_membership(&mut r, is_member_is(system, &x, depth)?);
    ctx.done(&r, if decided { Exit::Ok } else { Exit::Undetermined })
}

fn describe_case(c: &GapCase) -> String {
    match c {
        GapCase::Separated { cylinder } => format!("elements stay outside {cylinder}"),
        GapCase::BoundedDigit { position, digit } => format!("digit {position} stays {digit}"),
        GapCase::RepeatedElement { parameter } => format!("the element for parameter {parameter} recurs"),
    }
}

fn exit_for(v: &Verdict) -> Exit {
    match v {
        Verdict::Converges => Exit::Ok,
        Verdict::Diverges(_) => Exit::Diverges,
        Verdict::Undetermined(_) => Exit::Undetermined,
    }
}

fn push_verdict(r: &mut Record, v: &Verdict) {
    r.text("verdict", v.name());
    match v {
        Verdict::Converges => {}
        Verdict::Diverges(d) => {
            r.number("gap", d.gap.clone());
            r.text("indices", d.pattern.to_string());
            r.text("reason", describe_case(&d.case));
        }
        Verdict::Undetermined(why) => {
            r.text("reason", why.clone());
        }
    }
}

fn verdict_record(v: &ConvergenceVerdict) -> Record {
    let mut r = Record::new();
    r.text("proposition", v.proposition.id());
    push_verdict(&mut r, &v.verdict);
    let rows = v
        .evidence
        .iter()
        .map(|row| {
            let (check, threshold) = match &row.check {
                Check::Bound(b) => ("bound", Field::Number(b.clone())),
                Check::Gap(g) => ("gap", Field::Number(g.clone())),
                Check::Unchecked => ("none", Field::Text("-".into())),
            };
            vec![
                Field::Integer(row.n),
                Field::Number(row.lower.clone()),
                Field::Number(row.upper.clone()),
                Field::Flag(row.exact),
                Field::Text(check.into()),
                threshold,
                Field::Flag(row.holds),
            ]
        })
        .collect();
    r.push(
        "evidence",
        Field::Table {
            columns: vec!["n", "lower", "upper", "exact", "check", "threshold", "holds"],
            rows,
        },
    );
    r.push("consistent", Field::Flag(v.evidence_consistent()));
    r
}

pub fn converge(ctx: &Ctx, path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let spec = ConvergenceSpec::parse(&text)?.resolve(ctx.as_exact)?;
    let samples = spec.samples.clone().unwrap_or_else(|| DEFAULT_SAMPLES.to_vec());
    let mut r = Record::new();
    r.text("system", spec.system.name()).text("representation", spec.kind.to_string());
    match &spec.target {
        ResolvedTarget::OneSided(target) => {
            let v = decide(spec.kind, &spec.system, target, &spec.family, &samples)?;
            let exit = exit_for(&v.verdict);
            let inner = verdict_record(&v);
            for (k, f) in inner.into_fields() {
                r.push(k, f);
            }
            ctx.done(&r, exit)
        }
        ResolvedTarget::TwoSided(x0) => {
            let values = explicit_values(&spec.family, spec.kind)?;
            let v = decide_two_sided(spec.kind, &spec.system, x0, &values)?;
            r.number("x0", x0.clone());
            for (key, side) in [("left", &v.left), ("right", &v.right)] {
                match side {
                    Some(s) => r.push(key, Field::Nested(verdict_record(s))),
                    None => r.text(key, "no elements"),
                };
            }
            push_verdict(&mut r, &v.overall);
            ctx.done(&r, exit_for(&v.overall))
        }
    }
}

fn explicit_values(family: &SequenceFamily, kind: Representation) -> Result<Vec<Rational>, CliError> {
    let SequenceFamily::Explicit(list) = family else {
        return Err(CliError::usage("a two-sided target needs an explicit family"));
    };
    list.iter()
        .enumerate()
        .map(|(i, e)| match e {
            ExplicitElement::Value(x) => Ok(x.clone()),
            ExplicitElement::Digits(s) => s
                .exact_value(kind)
                .ok_or_else(|| perron_core::Error::NotExactlyEvaluable { index: i as u64 + 1 }.into()),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Render {
    Text,
    Svg,
}

pub struct DiagramArgs<'a> {
    pub base: &'a [String],
    pub depth: usize,
    pub width: usize,
    pub depth_cap: usize,
    pub render: Render,
}

pub fn diagram_cmd(ctx: &Ctx, args: DiagramArgs) -> Outcome {
    if args.depth > args.depth_cap {
        return Err(CliError::usage(format!(
            "depth {} exceeds the cap {}; raise --depth-cap to draw deeper",
            args.depth, args.depth_cap
        )));
    }
    let system = ctx.system()?;
    let base = PrefixBase::new(system.clone(), diagram::parse_base(args.base)?)?;
    let tree = diagram::build(&base, ctx.kind(), args.depth, args.width);
    let text = if ctx.style.format == Format::Json {
        let mut s = serde_json::to_string_pretty(&diagram::render_json(&tree)).expect("serializable");
        s.push('\n');
        s
    } else {
        match args.render {
            Render::Text => diagram::render_text(&tree, ctx.kind(), system.name(), &ctx.style),
            Render::Svg => diagram::render_svg(&tree, ctx.kind(), system.name(), &ctx.style),
        }
    };
    Ok((text, Exit::Ok))
}

pub fn systems(ctx: &Ctx) -> Outcome {
    let mut rules: Vec<DigitRule> = BUILTIN_NAMES
        .iter()
        .map(|n| perron_core::builtin(n).expect("builtin"))
        .collect();
    if let Some(extra) = ctx.system.as_deref().filter(|s| !BUILTIN_NAMES.contains(s)) {
        rules.push((*resolve_system(extra)?).clone());
    }
    let descriptors: Vec<SystemDescriptor> = rules.iter().map(SystemDescriptor::of).collect();
    if ctx.style.format == Format::Json {
        let mut s = serde_json::to_string_pretty(&descriptors).expect("serializable");
        s.push('\n');
        return Ok((s, Exit::Ok));
    }
    let rows = descriptors
        .iter()
        .map(|d| {
            vec![
                Field::Text(d.name.clone()),
                Field::Text(d.phi0.0.to_string()),
                Field::Text(d.template.clone()),
                Field::Integer(d.table.len() as u64),
            ]
        })
        .collect();
    let mut r = Record::new();
    r.push(
        "systems",
        Field::Table {
            columns: vec!["name", "phi0", "template", "table"],
            rows,
        },
    );
    ctx.done(&r, Exit::Ok)
}
