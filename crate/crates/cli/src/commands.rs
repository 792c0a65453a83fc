use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use repcert::certify::{certificate_from_pair, certify_dfao, certify_morphic, certify_pda, verify_certificate};
use repcert::machine::{Machine, MachineFile};
use repcert::morphic::{self, MorphicSpec};
use repcert::numbers::{cf_quadratic, imitation_index, DigitStream};
use repcert::pda::{xi2, Distinction, Dpao, PairBudget};
use repcert::words::{dio_profile, FactorIndex};
use repcert::{
    dfao, validate_dfao, validate_dpao, validate_morphic, Certificate, Error, PeriodCap, Ratio, SequenceSource,
    TagMachine,
};
use serde_json::{json, Value};

use crate::ranges::{parse_length, parse_lengths, parse_pair, RangeError};
use crate::{
    AnalyzeArgs, CatalogAction, CertifyArgs, CfArgs, Cli, Command, ConvertArgs, DigitsArgs, DilationArgs,
    EquivArgs, Format, GrowthArgs, ImitateArgs, SourceArgs, VerifyArgs,
};

pub const BUDGET_EXHAUSTED: u8 = 1;
pub const INVALID_INPUT: u8 = 2;
pub const INSUFFICIENT_DATA: u8 = 3;
pub const CAP_REFUSAL: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InsufficientData { .. } => INSUFFICIENT_DATA,
            Error::CapExceeded { .. } => CAP_REFUSAL,
            Error::BudgetExhausted(_) => BUDGET_EXHAUSTED,
            _ => INVALID_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<RangeError> for Failure {
    fn from(e: RangeError) -> Self {
        Failure::invalid(e.to_string())
    }
}

type Outcome<T = ()> = Result<T, Failure>;

/// `print!` that stops quietly when stdout is closed.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

pub fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Digits(a) => digits(a),
        Command::Analyze(a) => analyze(a, format),
        Command::Certify(a) => certify(a, format),
        Command::Verify(a) => verify(a, format),
        Command::Convert(a) => convert(a),
        Command::Dilation(a) => dilation(a, format),
        Command::Growth(a) => growth(a, format),
        Command::Equiv(a) => equiv(a, format),
        Command::Imitate(a) => imitate(a, format),
        Command::Cf(a) => cf(a, format),
        Command::Catalog(a) => catalog(&a.action, format),
    }
}

const CATALOG: &[(&str, &str)] = &[
    ("three-squares", "sums of three squares, base 2 (alias xi0)"),
    ("tm", "Thue-Morse automaton"),
    ("tm-morphic", "Thue-Morse as a 2-uniform morphism"),
    ("xi1", "a->acb, b->abc, c->c coded a,b,c -> 0,1,2"),
    ("squares", "a->ab, b->ccb, c->c: 1 at perfect squares"),
    ("fibonacci", "Fibonacci morphism"),
    ("xi2", "pushdown machine for balanced binary expansions"),
];

fn catalog_machine(name: &str) -> Outcome<Machine> {
    Ok(match name {
        "three-squares" | "xi0" => Machine::Dfao(dfao::three_squares()),
        "tm" | "thue-morse" => Machine::Dfao(dfao::thue_morse()),
        "tm-morphic" => Machine::Morphic(morphic::thue_morse()),
        "xi1" => Machine::Morphic(morphic::xi1()),
        "squares" => Machine::Morphic(morphic::squares()),
        "fibonacci" => Machine::Morphic(morphic::fibonacci()),
        "xi2" => Machine::Dpao(xi2()),
        _ => return Err(Failure::invalid(format!("no catalog machine named {name:?}"))),
    })
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// A path or `catalog:NAME`.
fn load_machine(spec: &str) -> Outcome<Machine> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return catalog_machine(name);
    }
    let file = MachineFile::load(Path::new(spec)).map_err(|e| Failure::invalid(format!("{spec}: {e}")))?;
    let context = |e: Error| Failure::invalid(format!("{spec}: {e}"));
    Ok(match &file {
        MachineFile::Dfao(f) => {
            let (m, report) = validate_dfao(f).map_err(context)?;
            warn(&report.warnings);
            Machine::Dfao(m)
        }
        MachineFile::Morphic(f) | MachineFile::Tag(f) => {
            let (m, report) = validate_morphic(f).map_err(context)?;
            warn(&report.warnings);
            if matches!(file, MachineFile::Tag(_)) {
                Machine::Tag(m)
            } else {
                Machine::Morphic(m)
            }
        }
        MachineFile::Dpao(f) => {
            let (m, report) = validate_dpao(f).map_err(context)?;
            warn(&report.warnings);
            Machine::Dpao(m)
        }
    })
}

enum Loaded {
    Machine(Machine),
    Stream(DigitStream),
}

impl Loaded {
    fn as_source(&self) -> &dyn SequenceSource {
        match self {
            Loaded::Machine(m) => m.as_source(),
            Loaded::Stream(s) => s,
        }
    }
}

fn load_source(args: &SourceArgs) -> Outcome<Loaded> {
    match (&args.machine, &args.stream) {
        (Some(m), None) => Ok(Loaded::Machine(load_machine(m)?)),
        (None, Some(s)) => DigitStream::parse(s, args.base).map(Loaded::Stream).map_err(|e| {
            let f = Failure::from(e);
            Failure {
                message: format!("{s}: {}", f.message),
                ..f
            }
        }),
        _ => Err(Failure::invalid("give exactly one of --machine or --stream")),
    }
}

fn morphic_of(machine: &Machine) -> Outcome<&MorphicSpec> {
    match machine {
        Machine::Morphic(s) | Machine::Tag(s) => Ok(s),
        _ => Err(Failure::invalid("this command needs a morphic or tag machine")),
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn emit_json(value: &Value) {
    outln!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn approx(r: Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn ratio_text(r: Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ratio_json(r: Ratio) -> Value {
    json!({ "exact": ratio_text(r), "approximate": approx(r) })
}

fn cap_name(cap: PeriodCap) -> String {
    match cap {
        PeriodCap::Half => "half".into(),
        PeriodCap::Unbounded => "unbounded".into(),
        PeriodCap::AtMost(c) => c.to_string(),
    }
}

fn parse_cap(text: &str) -> Outcome<PeriodCap> {
    match text {
        "half" => Ok(PeriodCap::Half),
        "unbounded" => Ok(PeriodCap::Unbounded),
        n => n
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .map(PeriodCap::AtMost)
            .ok_or_else(|| Failure::invalid(format!("bad period cap {n:?}: expected half, unbounded or a number"))),
    }
}

fn digits(args: &DigitsArgs) -> Outcome {
    let loaded = load_source(&args.source)?;
    let count = parse_length(&args.count)?;
    let prefix = loaded.as_source().prefix(count)?;
    emit(&format!("{}\n", prefix.render()), args.output.as_ref())
}

struct Section {
    text: String,
    json: Value,
}

fn dio_section(source: &dyn SequenceSource, lengths: &[usize], cap: PeriodCap) -> Outcome<Section> {
    let rows = dio_profile(source, lengths, cap)?;
    let mut text = format!("repetition profile (period cap {}; decimals approximate)\n", cap_name(cap));
    let _ = writeln!(text, "{:>10} {:>14} {:>10} {:>14}  witness", "ell", "ratio", "~", "record");
    let mut json_rows = Vec::new();
    for row in &rows {
        let witness = row
            .witness
            .map_or("-".to_string(), |w| format!("u={} v={} ext={}", w.u, w.v, w.ext));
        let _ = writeln!(
            text,
            "{:>10} {:>14} {:>10.6} {:>14}  {witness}",
            row.ell,
            ratio_text(row.ratio),
            approx(row.ratio),
            ratio_text(row.record)
        );
        json_rows.push(json!({
            "ell": row.ell,
            "ratio": ratio_json(row.ratio),
            "record": ratio_json(row.record),
            "witness": row.witness,
        }));
    }
    Ok(Section {
        text,
        json: json!({ "cap": cap_name(cap), "rows": json_rows }),
    })
}

fn complexity_section(source: &dyn SequenceSource, lengths: &[usize], prefix_len: usize) -> Outcome<Section> {
    let prefix = source.prefix(prefix_len)?;
    let index = FactorIndex::new(prefix.symbols());
    let max = *lengths.last().expect("length lists are non-empty");
    if max > prefix_len {
        return Err(Error::InsufficientData {
            needed: max,
            available: prefix_len,
        }
        .into());
    }
    let table = index.complexity_table(max);
    let mut text = format!("factor complexity on a prefix of length {prefix_len}\n");
    let _ = writeln!(text, "{:>8} {:>10} {:>14}", "n", "p(n)", "right-special");
    let mut rows = Vec::new();
    for &n in lengths {
        let special = index.right_special(n);
        let _ = writeln!(text, "{n:>8} {:>10} {special:>14}", table[n]);
        rows.push(json!({ "n": n, "p": table[n], "rightSpecial": special }));
    }
    Ok(Section {
        text,
        json: json!({ "prefix": prefix_len, "rows": rows }),
    })
}

fn dilation_section(spec: &MorphicSpec, max_n: u64) -> Outcome<Section> {
    let est = TagMachine::new(spec.clone()).dilation_profile(max_n)?;
    let mut text = String::from("dilation W(n)/n (decimals approximate)\n");
    let _ = writeln!(text, "{:>10} {:>16} {:>10}", "n", "W(n)/n", "~");
    for &(n, r) in &est.samples {
        let _ = writeln!(text, "{n:>10} {:>16} {:>10.6}", ratio_text(r), approx(r));
    }
    let _ = writeln!(
        text,
        "minimum {} (~{:.6}) at n = {}",
        ratio_text(est.min_ratio),
        approx(est.min_ratio),
        est.argmin
    );
    let _ = writeln!(text, "liminf above 1: {}", if est.exceeds_one { "yes" } else { "no" });
    let samples: Vec<Value> = est
        .samples
        .iter()
        .map(|&(n, r)| json!({ "n": n, "ratio": ratio_json(r) }))
        .collect();
    Ok(Section {
        text,
        json: json!({
            "samples": samples,
            "minRatio": ratio_json(est.min_ratio),
            "argmin": est.argmin,
            "exceedsOne": est.exceeds_one,
        }),
    })
}

fn growth_section(spec: &MorphicSpec) -> Outcome<Section> {
    let report = spec.growth_report()?;
    let radius = spec.spectral_radius_estimate(1e-10)?;
    let names = spec.internal();
    let mut text = String::from("letter growth |sigma^n(b)| ~ n^k theta^n (theta approximate)\n");
    let _ = writeln!(text, "{:>8} {:>12} {:>4} {:>12}", "letter", "theta", "k", "exponential");
    let mut letters = Vec::new();
    for (b, g) in report.per_letter.iter().enumerate() {
        let name = names.name(b as u32);
        let _ = writeln!(
            text,
            "{name:>8} {:>12.9} {:>4} {:>12}",
            g.theta,
            g.poly_degree,
            if g.exponential { "yes" } else { "no" }
        );
        letters.push(json!({ "letter": name, "theta": g.theta, "k": g.poly_degree, "exponential": g.exponential }));
    }
    let maximal: Vec<&str> = report.maximal_growth.iter().map(|&b| names.name(b)).collect();
    let _ = writeln!(text, "maximal growth letters: {}", maximal.join(" "));
    let _ = writeln!(text, "spectral radius ~{radius:.9}");
    let _ = writeln!(
        text,
        "exponential growth: {}",
        if report.global_exponential { "yes" } else { "no" }
    );
    Ok(Section {
        text,
        json: json!({
            "letters": letters,
            "maximalGrowth": maximal,
            "spectralRadius": radius,
            "exponential": report.global_exponential,
        }),
    })
}

fn analyze(args: &AnalyzeArgs, format: Format) -> Outcome {
    let loaded = load_source(&args.source)?;
    let source = loaded.as_source();
    let mut sections: Vec<(&str, Section)> = Vec::new();
    if let Some(dio) = &args.dio {
        let lengths = parse_lengths(dio)?;
        sections.push(("dio", dio_section(source, &lengths, parse_cap(&args.cap)?)?));
    }
    if let Some(c) = &args.complexity {
        let lengths = parse_lengths(c)?;
        let prefix = match &args.prefix {
            Some(p) => parse_length(p)?,
            None => (1usize << 18).max(4 * lengths.last().copied().unwrap_or(1)),
        };
        sections.push(("complexity", complexity_section(source, &lengths, prefix)?));
    }
    if args.dilation.is_some() || args.growth {
        let Loaded::Machine(machine) = &loaded else {
            return Err(Failure::invalid("dilation and growth need a morphic or tag machine"));
        };
        let spec = morphic_of(machine)?;
        if let Some(d) = &args.dilation {
            sections.push(("dilation", dilation_section(spec, parse_length(d)? as u64)?));
        }
        if args.growth {
            sections.push(("growth", growth_section(spec)?));
        }
    }
    if sections.is_empty() {
        return Err(Failure::invalid(
            "nothing to analyze: give --dio, --complexity, --dilation or --growth",
        ));
    }
    let out = match format {
        Format::Text => {
            let mut text = format!("source {}\n", source.id());
            for (_, s) in &sections {
                text.push('\n');
                text.push_str(&s.text);
            }
            text
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            map.insert("source".into(), source.id().into());
            for (key, s) in sections {
                map.insert(key.into(), s.json);
            }
            let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize");
            text.push('\n');
            text
        }
    };
    emit(&out, args.output.as_ref())
}

fn single_section(section: Section, format: Format) {
    match format {
        Format::Text => out!("{}", section.text),
        Format::Json => emit_json(&section.json),
    }
}

fn dilation(args: &DilationArgs, format: Format) -> Outcome {
    let machine = load_machine(&args.machine)?;
    let max_n = parse_length(&args.max_n)? as u64;
    single_section(dilation_section(morphic_of(&machine)?, max_n)?, format);
    Ok(())
}

fn growth(args: &GrowthArgs, format: Format) -> Outcome {
    let machine = load_machine(&args.machine)?;
    single_section(growth_section(morphic_of(&machine)?)?, format);
    Ok(())
}

fn certify(args: &CertifyArgs, format: Format) -> Outcome {
    let loaded = load_source(&args.source)?;
    let source = loaded.as_source();
    let cert = if let Some(pair) = &args.pair {
        let (n, n_prime) = parse_pair(pair).map_err(Failure::invalid)?;
        let machine_k = match &loaded {
            Loaded::Machine(Machine::Dfao(m)) => Some(m.k()),
            Loaded::Machine(Machine::Dpao(m)) => Some(m.k()),
            _ => None,
        };
        let k = args
            .k
            .or(machine_k)
            .ok_or_else(|| Failure::invalid("--pair on this source needs --k"))?;
        certificate_from_pair(source, n, n_prime, k, args.depth)?
    } else {
        match &loaded {
            Loaded::Machine(Machine::Dfao(m)) => certify_dfao(m, args.depth)?,
            Loaded::Machine(Machine::Dpao(m)) => {
                let budget = PairBudget {
                    n_max: args.budget,
                    height_cap: args.height_cap,
                };
                certify_pda(m, budget, args.depth)?.ok_or_else(|| Failure {
                    code: BUDGET_EXHAUSTED,
                    message: format!(
                        "no equivalent pair with n' <= {} at stack height cap {}; this proves nothing",
                        args.budget, args.height_cap
                    ),
                })?
            }
            Loaded::Machine(Machine::Morphic(s) | Machine::Tag(s)) => certify_morphic(s, args.depth)?,
            Loaded::Stream(_) => return Err(Failure::invalid("digit streams need --pair n,n' and --k")),
        }
    };

    let summary = summary(&cert, format);
    match &args.output {
        Some(path) => {
            emit(&cert.to_json(), Some(path))?;
            out!("{summary}");
        }
        None => {
            out!("{}", cert.to_json());
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn summary(cert: &Certificate, format: Format) -> String {
    let conclusion = "a real number whose digits form this sequence is either rational or transcendental";
    if format == Format::Json {
        let value = json!({
            "kind": cert.kind,
            "machine": cert.machine,
            "pair": cert.n.zip(cert.n_prime),
            "method": cert.method,
            "bound": ratio_json(cert.dio_lower_bound),
            "attained": ratio_json(cert.attained_bound),
            "ratioGrowth": ratio_json(cert.ratio_growth_bound),
            "depth": cert.verified_depth,
            "witnesses": cert.witnesses.len(),
            "conclusion": conclusion,
        });
        let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
        s.push('\n');
        return s;
    }
    let kind = serde_json::to_value(cert.kind).expect("kinds serialize");
    let mut s = format!("{} certificate for {}\n", kind.as_str().unwrap_or_default(), cert.machine);
    if let (Some(n), Some(n_prime)) = (cert.n, cert.n_prime) {
        let _ = write!(s, "pair ({n},{n_prime})");
        if let Some(method) = cert.method {
            let _ = write!(s, " by {method} equivalence");
        }
        s.push('\n');
    }
    if let Some(seed) = &cert.seed {
        let _ = writeln!(s, "seed U = {:?}, b = {:?}, V = {:?}", seed.u, seed.b, seed.v);
    }
    let _ = writeln!(
        s,
        "bound {} (~{:.6}), attained {}, ratio growth {}",
        ratio_text(cert.dio_lower_bound),
        approx(cert.dio_lower_bound),
        ratio_text(cert.attained_bound),
        ratio_text(cert.ratio_growth_bound)
    );
    let _ = writeln!(
        s,
        "{} witnesses checked to depth {}",
        cert.witnesses.len(),
        cert.verified_depth
    );
    let _ = writeln!(s, "\"{conclusion}\"");
    s
}

fn verify(args: &VerifyArgs, format: Format) -> Outcome {
    let loaded = load_source(&args.source)?;
    let text = std::fs::read_to_string(&args.certificate)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.certificate.display())))?;
    let cert = Certificate::from_json(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.certificate.display())))?;
    let report = verify_certificate(loaded.as_source(), &cert, args.extra_depth)?;
    match format {
        Format::Json => emit_json(&json!({ "valid": true, "report": report })),
        Format::Text => {
            outln!("certificate is valid for {}", cert.machine);
            outln!(
                "{} witnesses checked, pair identities to depth {}",
                report.witnesses_checked, report.checked_depth
            );
            for claim in &report.approximations {
                outln!("{claim}");
            }
        }
    }
    Ok(())
}

fn convert(args: &ConvertArgs) -> Outcome {
    let converted = match load_machine(&args.machine)? {
        Machine::Dfao(m) => MachineFile::Morphic(MorphicSpec::from_dfao(&m)?.to_file()),
        Machine::Morphic(s) | Machine::Tag(s) => MachineFile::Dfao(s.to_dfao()?.to_file()),
        Machine::Dpao(_) => return Err(Failure::invalid("pushdown machines have no conversion")),
    };
    emit(&converted.to_json(), args.output.as_ref())
}

fn pushdown_of(machine: Machine) -> Outcome<Dpao> {
    match machine {
        Machine::Dpao(m) => Ok(m),
        Machine::Dfao(m) => Ok(Dpao::from_dfao(&m)),
        _ => Err(Failure::invalid("equiv needs a dpao or dfao machine")),
    }
}

fn equiv(args: &EquivArgs, format: Format) -> Outcome {
    let machine = pushdown_of(load_machine(&args.machine)?)?;
    if let Some(pair) = &args.pair {
        let (n, n_prime) = parse_pair(pair).map_err(Failure::invalid)?;
        let outcome = machine.bounded_distinguish(n, n_prime, args.depth);
        match (format, outcome) {
            (Format::Json, Distinction::Distinguished { word }) => {
                emit_json(&json!({ "pair": [n, n_prime], "distinguished": true, "word": word }))
            }
            (Format::Json, Distinction::IndistinguishableToDepth { depth }) => {
                emit_json(&json!({ "pair": [n, n_prime], "distinguished": false, "depth": depth }))
            }
            (Format::Text, Distinction::Distinguished { word }) => {
                let w: String = word.iter().map(|d| d.to_string()).collect();
                outln!("({n},{n_prime}) distinguished by the suffix {w:?}");
            }
            (Format::Text, Distinction::IndistinguishableToDepth { depth }) => {
                outln!("({n},{n_prime}) agree on every suffix of length at most {depth}; inconclusive");
            }
        }
        return Ok(());
    }
    let budget = PairBudget {
        n_max: args.budget,
        height_cap: args.height_cap,
    };
    let found = machine.find_equivalent_pair(budget).ok_or_else(|| Failure {
        code: BUDGET_EXHAUSTED,
        message: format!("no equivalent pair with n' <= {}", args.budget),
    })?;
    match format {
        Format::Json => emit_json(&json!({
            "n": found.n,
            "nPrime": found.n_prime,
            "method": found.method,
            "configurations": [
                format!("{:?}", machine.config_of(found.n)),
                format!("{:?}", machine.config_of(found.n_prime)),
            ],
        })),
        Format::Text => {
            outln!("pair ({},{}) by {} equivalence", found.n, found.n_prime, found.method);
            for n in [found.n, found.n_prime] {
                let c = machine.config_of(n);
                let stack: Vec<&str> = c.stack.iter().map(|&g| machine.stack_alphabet().name(g)).collect();
                outln!(
                    "  C({n}) = state {}, stack #{}",
                    machine.states().name(c.state),
                    stack.concat()
                );
            }
        }
    }
    Ok(())
}

fn imitate(args: &ImitateArgs, format: Format) -> Outcome {
    let stream = DigitStream::parse(&args.stream, args.base)?;
    let result = imitation_index(&stream, args.k, args.states, args.len)?;
    let machine = MachineFile::Dfao(result.machine.to_file());
    if let Some(path) = &args.output {
        emit(&machine.to_json(), Some(path))?;
    }
    match format {
        Format::Json => emit_json(&json!({
            "stream": stream.id(),
            "index": result.index,
            "censored": result.censored,
            "candidates": result.candidates.to_string(),
            "machine": machine,
        })),
        Format::Text => {
            let censored = if result.censored { " censored" } else { "" };
            outln!("I={}{censored}", result.index);
            outln!(
                "{} candidate automata with at most {} states, input base {}",
                result.candidates, args.states, args.k
            );
            if args.output.is_none() {
                out!("{}", machine.to_json());
            }
        }
    }
    Ok(())
}

fn cf(args: &CfArgs, format: Format) -> Outcome {
    let expansion = cf_quadratic(args.d)?;
    let convergents = expansion.convergents(args.count);
    match format {
        Format::Json => emit_json(&json!({
            "d": args.d,
            "expansion": expansion.to_string(),
            "a0": expansion.a0,
            "preperiod": expansion.preperiod,
            "period": expansion.period,
            "convergents": convergents.iter().map(|(p, q)| format!("{p}/{q}")).collect::<Vec<_>>(),
        })),
        Format::Text => {
            outln!("sqrt({}) = {expansion}", args.d);
            for (m, (p, q)) in convergents.iter().enumerate() {
                outln!("{m:>4} {p}/{q}");
            }
        }
    }
    Ok(())
}

fn catalog(action: &CatalogAction, format: Format) -> Outcome {
    match action {
        CatalogAction::List => match format {
            Format::Json => emit_json(&json!(CATALOG
                .iter()
                .map(|(name, about)| json!({ "name": name, "description": about }))
                .collect::<Vec<_>>())),
            Format::Text => {
                for (name, about) in CATALOG {
                    let kind = catalog_machine(name)?.to_file().kind();
                    outln!("{name:<14} {kind:<8} {about}");
                }
            }
        },
        CatalogAction::Show { name } => out!("{}", catalog_machine(name)?.to_file().to_json()),
        CatalogAction::Export { dir } => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::invalid(format!("{}: {e}", dir.display())))?;
            for (name, _) in CATALOG {
                let path = dir.join(format!("{name}.json"));
                emit(&catalog_machine(name)?.to_file().to_json(), Some(&path))?;
                outln!("{}", path.display());
            }
        }
    }
    Ok(())
}
