use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use higman::benign::BenignCert;
use higman::error::{Error, Result};
use higman::io::{
    as_countable, as_finite, export_gap_style, parse_presentation, parse_subgroup, print_finite,
    print_presentation, print_subgroup, transliterate, Manifest, ManifestInputs, StageRecord,
};
use higman::pres::Presentation;
use higman::rope::{chain, full_pipeline, stated_chain_counts, to_two_generator, Stage};
use higman::seq::{eval_bounded, Bounds, Seq, SeqSetExpr};
use higman::twogen::{embed2gen, sequences_of, universal_word, CountablePresentation, TwoGenPresentation};
use higman::verify::{
    audit_counts, audit_header, check_action_lemma, expression_audit, fold, rank, rope_replay,
    AuditReport,
};
use higman::word::Sym;

#[derive(Parser)]
#[command(name = "higman", version, about = "Explicit embeddings of recursive groups into finitely presented groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Push a countable presentation into a 2-generator group.
    Embed2 {
        input: PathBuf,
        #[arg(long)]
        torsion_free: bool,
        /// Keep only the first N generators and the relators over them.
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Integer sequences coding the relators of the 2-generator image.
    Extract {
        input: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// List a bounded window of a sequence-set expression.
    Evalset {
        expr: String,
        #[arg(long = "L", default_value_t = 3)]
        l: i64,
        #[arg(long = "B", default_value_t = 3)]
        b: i64,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
    },
    /// Build a benign-subgroup certificate for an expression.
    Benign {
        expr: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Build the chains and the final group from a certificate directory.
    Rope {
        cert_dir: PathBuf,
        tgen: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Run every step and write a manifest.
    Pipeline {
        input: PathBuf,
        expr: String,
        #[arg(long = "L", default_value_t = 4)]
        l: i64,
        #[arg(long = "B", default_value_t = 3)]
        b: i64,
        #[arg(long = "N", default_value_t = 4)]
        n: usize,
        #[arg(short)]
        o: PathBuf,
    },
    /// Map a finite presentation into a 2-generator group by universal words.
    TwogenFinal {
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Re-audit a pipeline directory and run spot-checks.
    Verify { dir: PathBuf },
    /// Write a presentation in GAP syntax.
    ExportGap {
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
}

enum Fail {
    Usage(String),
    Parse(String),
    Audit(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Parse { .. } => Fail::Parse(e.to_string()),
            other => Fail::Usage(other.to_string()),
        }
    }
}

type Out = std::result::Result<(), Fail>;

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn write(p: &Path, text: &str) -> Result<()> {
    if let Some(d) = p.parent() {
        if !d.as_os_str().is_empty() {
            fs::create_dir_all(d)?;
        }
    }
    fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn two_gen_file(name: &str, t: &TwoGenPresentation) -> CountablePresentation {
    CountablePresentation {
        name: name.to_string(),
        gens: vec![Sym::new("x"), Sym::new("y")],
        rels: t.rels.clone(),
        torsion_free: false,
    }
}

fn is_two_gen(p: &CountablePresentation) -> bool {
    p.gens.len() == 2 && p.gens[0].as_str() == "x" && p.gens[1].as_str() == "y"
}

fn seq_lines(seqs: &[Seq]) -> String {
    seqs.iter().map(|s| format!("{s}\n")).collect()
}

fn audit_text(reports: &[AuditReport]) -> String {
    let mut s = audit_header();
    s.push('\n');
    for r in reports {
        s.push_str(&format!("{r}\n"));
    }
    s
}

fn check_audits(reports: &[AuditReport]) -> Out {
    let bad: Vec<&AuditReport> = reports.iter().filter(|r| r.unexplained()).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Fail::Audit(format!("{} audit(s) failed: {}", bad.len(), bad.iter().map(|r| r.stage.as_str()).collect::<Vec<_>>().join(", "))))
    }
}

fn write_cert(dir: &Path, c: &BenignCert) -> Result<()> {
    write(&dir.join("K.grp"), &print_finite(&c.k))?;
    write(&dir.join("L.sub"), &print_subgroup(&c.k.name, &c.l.gens))?;
    write(&dir.join("expression.txt"), &format!("{}\n", c.expr))
}

fn read_cert(dir: &Path) -> Result<BenignCert> {
    let k = as_finite(&parse_presentation(&read(&dir.join("K.grp"))?)?);
    let (_, l) = parse_subgroup(&read(&dir.join("L.sub"))?)?;
    let expr = SeqSetExpr::parse(read(&dir.join("expression.txt"))?.trim())?;
    let c = BenignCert { expr, k, l: higman::Subgroup { gens: l } };
    c.validate()?;
    Ok(c)
}

fn stage_file(i: usize, name: &str) -> String {
    format!("{:02}_{name}.grp", i + 1)
}

/// Writes the chain stages and `𝒢`; returns stage records with audits.
fn write_chain(dir: &Path, c: &BenignCert, stages: &[Stage], g: &Presentation) -> Result<Vec<StageRecord>> {
    let (m, n, k) = c.meta();
    let mut recs = Vec::new();
    let all: Vec<(&str, &Presentation, Option<&Stage>)> = stages
        .iter()
        .map(|s| (s.name.as_str(), &s.k, Some(s)))
        .chain(std::iter::once(("G", g, None)))
        .collect();
    for (i, ((name, p, st), (_, eg, er))) in all.iter().zip(stated_chain_counts(m, n, k)).enumerate() {
        let file = stage_file(i, name);
        write(&dir.join(&file), &print_finite(p))?;
        if let Some(s) = st {
            write(&dir.join(format!("{:02}_{name}.sub", i + 1)), &print_subgroup(name, &s.l.gens))?;
        }
        let r = audit_counts(p, (eg, er), name);
        recs.push(StageRecord {
            name: name.to_string(),
            file,
            gens: r.actual.0,
            rels: r.actual.1,
            expected_gens: eg,
            expected_rels: er,
            verdict: if r.pass { "pass".into() } else { "fail".into() },
        });
    }
    Ok(recs)
}

fn records_audit(recs: &[StageRecord]) -> Vec<AuditReport> {
    recs.iter()
        .map(|r| AuditReport {
            stage: r.name.clone(),
            expected: (r.expected_gens, r.expected_rels),
            actual: (r.gens, r.rels),
            pass: (r.gens, r.rels) == (r.expected_gens, r.expected_rels),
            note: String::new(),
        })
        .collect()
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Embed2 { input, torsion_free, kmax, o } => {
            let mut g = parse_presentation(&read(&input)?)?;
            g.torsion_free |= torsion_free;
            if let Some(k) = kmax {
                g.gens.truncate(k);
                let keep: std::collections::HashSet<Sym> = g.gens.iter().cloned().collect();
                g.rels.retain(|r| r.generators().iter().all(|s| keep.contains(s)));
            }
            let (t, _) = embed2gen(&g)?;
            write(&o, &print_presentation(&two_gen_file(&format!("T_{}", g.name), &t)))?;
        }
        Cmd::Extract { input, o } => {
            let g = parse_presentation(&read(&input)?)?;
            let t = if is_two_gen(&g) { TwoGenPresentation { rels: g.rels.clone() } } else { embed2gen(&g)?.0 };
            let text = seq_lines(&sequences_of(&t)?);
            match o {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
        Cmd::Evalset { expr, l, b, n } => {
            let e = SeqSetExpr::parse(&expr)?;
            let mut set: Vec<Seq> = eval_bounded(&e, &Bounds::new(b, l, n)).into_iter().collect();
            let lo = set.iter().filter_map(|s| s.support()).map(|x| x.0).min().unwrap_or(0);
            let hi = set.iter().filter_map(|s| s.support()).map(|x| x.1).max().unwrap_or(0);
            set.sort_by_key(|s| (lo..=hi).map(|i| s.get(i)).collect::<Vec<_>>());
            for s in set {
                println!("{s}");
            }
        }
        Cmd::Benign { expr, o } => {
            let e = SeqSetExpr::parse(&expr)?;
            let (c, reports) = expression_audit(&e)?;
            write_cert(&o, &c)?;
            write(&o.join("audit.txt"), &audit_text(&reports))?;
            let (m, n, k) = c.meta();
            println!("{}: {m} generators, {n} relators, {k} subgroup generators", c.expr);
            for r in reports.iter().filter(|r| !r.pass && !r.unexplained()) {
                eprintln!("warning: {r}");
            }
            check_audits(&reports)?;
        }
        Cmd::Rope { cert_dir, tgen, o } => {
            let c = read_cert(&cert_dir)?;
            let t = parse_presentation(&read(&tgen)?)?;
            let (stages, g) = chain(&c, &t.rels)?;
            let recs = write_chain(&o, &c, &stages, &g)?;
            let reports = records_audit(&recs);
            write(&o.join("audit.txt"), &audit_text(&reports))?;
            check_audits(&reports)?;
        }
        Cmd::Pipeline { input, expr, l, b, n, o } => {
            let g = parse_presentation(&read(&input)?)?;
            let e = SeqSetExpr::parse(&expr)?;
            let bounds = Bounds::new(b, l, n);
            let res = full_pipeline(&g, &e, &bounds)?;
            for w in &res.warnings {
                eprintln!("warning: {w}");
            }
            write(&o.join("input.grp"), &print_presentation(&g))?;
            write(&o.join("T.grp"), &print_presentation(&two_gen_file(&format!("T_{}", g.name), &TwoGenPresentation { rels: res.t_relators.clone() })))?;
            write(&o.join("sequences.txt"), &seq_lines(&res.sequences))?;
            write_cert(&o.join("cert"), &res.cert)?;
            let recs = write_chain(&o, &res.cert, &res.intermediates, &res.g_final)?;
            let phi: String = g
                .gens
                .iter()
                .map(|s| format!("{s} -> {}\n", res.phi.get(s).map(|w| w.to_string()).unwrap_or_default()))
                .collect();
            write(&o.join("phi.txt"), &phi)?;
            let reports = records_audit(&recs);
            write(&o.join("audit.txt"), &audit_text(&reports))?;
            let m = Manifest {
                inputs: ManifestInputs { file: input.display().to_string(), expression: e.to_string(), bounds: (b, l, n) },
                stages: recs,
                generator_index: res.g_final.gens.iter().enumerate().map(|(i, s)| (i + 1, s.to_string())).collect(),
                transliteration: transliterate(&res.g_final.gens),
                warnings: res.warnings.clone(),
            };
            write(&o.join("manifest.json"), &m.to_json())?;
            check_audits(&reports)?;
        }
        Cmd::TwogenFinal { input, o } => {
            let g = as_finite(&parse_presentation(&read(&input)?)?);
            let (t, _) = to_two_generator(&g)?;
            let mut text = String::new();
            for (i, s) in g.gens.iter().enumerate() {
                text.push_str(&format!("-- {} {s}\n", i + 1));
            }
            text.push_str(&print_presentation(&as_countable(&t)));
            write(&o, &text)?;
        }
        Cmd::Verify { dir } => verify_dir(&dir)?,
        Cmd::ExportGap { input, o } => {
            let g = as_finite(&parse_presentation(&read(&input)?)?);
            write(&o, &export_gap_style(&g))?;
        }
    }
    Ok(())
}

fn verify_dir(dir: &Path) -> Out {
    let m = Manifest::from_json(&read(&dir.join("manifest.json"))?)?;
    let mut reports = Vec::new();
    for r in &m.stages {
        let p = as_finite(&parse_presentation(&read(&dir.join(&r.file))?)?);
        let mut a = audit_counts(&p, (r.expected_gens, r.expected_rels), &r.name);
        if a.actual != (r.gens, r.rels) {
            a.pass = false;
        }
        reports.push(a);
    }
    print!("{}", audit_text(&reports));
    let mut ok = reports.iter().all(|r| r.pass);
    let lemma = (-3..=3).all(|j| {
        [Seq::zero(), Seq::from_slice(&[2, 5, 3]), Seq::new(-2, &[1, -1, 0, 3])].iter().all(|f| check_action_lemma(f, j))
    });
    println!("action lemma spot-check: {}", if lemma { "pass" } else { "FAIL" });
    let ranks = (1..=6).all(|n| {
        [false, true].iter().all(|tf| {
            let ws: Vec<_> = (1..=n).filter_map(|i| universal_word(i, *tf).ok()).collect();
            rank(&fold(&ws)) == n as usize
        })
    });
    println!("universal word ranks: {}", if ranks { "pass" } else { "FAIL" });
    ok &= lemma && ranks;
    if let (Some(last), Ok(seqs)) = (m.stages.last(), read(&dir.join("sequences.txt"))) {
        let g = as_finite(&parse_presentation(&read(&dir.join(&last.file))?)?);
        for line in seqs.lines().filter(|l| !l.trim().is_empty()) {
            let f = Seq::parse(line.trim())?;
            match rope_replay(&g, &f) {
                Ok(e) if e.check(&g) => println!("replay {f}: pass ({} steps)", e.len()),
                Ok(_) => {
                    println!("replay {f}: FAIL");
                    ok = false;
                }
                Err(e) => println!("replay {f}: skipped ({e})"),
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Fail::Audit("verification failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Audit(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
