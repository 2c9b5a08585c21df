//! `quiverdim`: homological invariants and derived-dimension bounds for
//! bound quiver algebras, reported as JSON.

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quiverdim_core::algebra::DEFAULT_NILPOTENCY_CAP;
use quiverdim_core::bounds::{derived_dim_bounds, search_best_v, DEFAULT_SEARCH_CAP};
use quiverdim_core::constructions::{
    check_addv_resolution, horseshoe, loewy_resolution, syzygy_generator, syzygy_shift_ses,
    thm47_certificate, AddResolution, CertifyOptions, ItCertificate, LongExactChain,
};
use quiverdim_core::homology::{
    default_cutoff, minimal_resolution, pd_set, projective_dimension_with_witness,
};
use quiverdim_core::modfile::{chain_from_json, chain_to_json, emit_module, resolve_module};
use quiverdim_core::random::default_samples;
use quiverdim_core::rep::{loewy_length, quotient, radical_power, socle, top_dims, IsoOptions};
use quiverdim_core::torsion::{algebra_layer_length, layer_functor, layer_length, torsion_radical};
use quiverdim_core::{
    corpus, parse_algebra, Algebra, Error, Field, FieldSpec, PrimeField, Rationals, Representation,
    Result, ShortExactSequence, SimpleSet,
};

#[derive(Parser, Debug)]
#[command(
    name = "quiverdim",
    version,
    about = "Homological invariants of bound quiver algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Ground field: a prime p or `Q`.
    #[arg(long, global = true, default_value = "32003")]
    field: String,
    /// Largest path length explored before declaring the ideal non-admissible.
    #[arg(long, global = true, default_value_t = DEFAULT_NILPOTENCY_CAP)]
    nilpotency_cap: usize,
    /// Resolution cutoff; defaults to 2·dim Λ + 4.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples used by isomorphism tests.
    #[arg(long, global = true, default_value_t = 64)]
    iso_samples: usize,
}

#[derive(Args, Debug, Clone)]
struct AlgebraArg {
    /// Algebra description file; `-` or absent reads stdin.
    algebra: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and normalize an algebra description.
    Parse(AlgebraArg),
    /// List the path basis, optionally restricted to one pair of vertices.
    Basis {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Indecomposable projectives: dimension vectors, tops, socles, Loewy lengths.
    Proj(AlgebraArg),
    /// Minimal projective resolution of a module.
    Resolve {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        module: String,
    },
    /// Projective dimension of a module, or of every simple.
    Pd {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        module: Option<String>,
    },
    /// Radical layer length relative to V.
    Layer {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long = "V", default_value = "none")]
        v: String,
        #[arg(long)]
        module: Option<String>,
    },
    /// Torsion radical and torsion-free quotient relative to V.
    Torsion {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long = "V", default_value = "none")]
        v: String,
        #[arg(long)]
        module: String,
        /// Also emit the torsion radical as a module.
        #[arg(long)]
        emit: bool,
    },
    /// Bound report for a chosen V.
    Bounds {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long = "V", default_value = "none")]
        v: String,
        /// Build the layer-length certificate constructively and record it.
        #[arg(long)]
        certify: bool,
        /// Extra random sample modules for `--certify`.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Constructive layer-length certificate over the sample corpus.
    Certify {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long = "V", default_value = "none")]
        v: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Include every evidence chain in full.
        #[arg(long)]
        chains: bool,
    },
    /// Run one construction and emit its exact chain.
    Construct {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, value_enum)]
        what: Option<What>,
        #[arg(long)]
        module: Option<String>,
        #[arg(long = "V", default_value = "none")]
        v: String,
        /// Radical power cutting the module into a short exact sequence.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Syzygy shift index.
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Re-check a stored chain instead of building one.
        #[arg(long)]
        verify_only: Option<PathBuf>,
    },
    /// Search all sets of finite-pd simples for the best bound.
    SearchV {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: usize,
    },
    /// Emit a named example algebra as text.
    Corpus {
        #[arg(value_parser = corpus::CORPUS_NAMES)]
        name: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum What {
    Horseshoe,
    Shift,
    Loewy,
    Thm47,
    CheckIt,
}

enum Output {
    Json(Value),
    Text(String),
}

fn read_algebra_text(arg: &AlgebraArg) -> Result<String> {
    let io = |e: std::io::Error| Error::Parameter(format!("cannot read algebra: {e}"));
    match &arg.algebra {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(io),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io)?;
            Ok(s)
        }
    }
}

fn algebra_arg(cmd: &Command) -> Option<&AlgebraArg> {
    use Command::*;
    match cmd {
        Parse(a) | Proj(a) => Some(a),
        Basis { alg, .. }
        | Resolve { alg, .. }
        | Pd { alg, .. }
        | Layer { alg, .. }
        | Torsion { alg, .. }
        | Bounds { alg, .. }
        | Certify { alg, .. }
        | Construct { alg, .. }
        | SearchV { alg, .. } => Some(alg),
        Corpus { .. } => None,
    }
}

fn dims_json<F: Field>(m: &Representation<F>) -> Value {
    json!(m.dims())
}

struct Ctx<F: Field> {
    alg: Arc<Algebra<F>>,
    g: Global,
}

impl<F: Field> Ctx<F> {
    fn cutoff(&self) -> usize {
        self.g.cutoff.unwrap_or_else(|| default_cutoff(&self.alg))
    }

    fn iso(&self) -> IsoOptions {
        IsoOptions {
            samples: self.g.iso_samples,
            seed: self.g.seed,
        }
    }

    fn module(&self, spec: &str) -> Result<Representation<F>> {
        resolve_module(&self.alg, spec)
    }

    fn set(&self, text: &str) -> Result<SimpleSet> {
        SimpleSet::parse(&self.alg, text)
    }

    fn names(&self, vs: &[usize]) -> Vec<String> {
        vs.iter()
            .map(|&v| self.alg.quiver().vertex_name(v).to_string())
            .collect()
    }
}

fn run_with<F: Field>(field: F, g: Global, cmd: Command, text: String) -> Result<Output> {
    let alg = parse_algebra(&text, field, g.nilpotency_cap)?;
    let ctx = Ctx { alg, g };
    let a = &ctx.alg;
    let q = a.quiver();
    match cmd {
        Command::Parse(_) => {
            let normalized = a.to_text();
            let relations: Vec<&str> = normalized
                .lines()
                .filter_map(|l| l.strip_prefix("relation: "))
                .collect();
            Ok(Output::Json(json!({
                "name": a.name(),
                "field": a.field().descriptor(),
                "vertices": q.vertex_names(),
                "arrows": q.arrows().iter().map(|x| json!({
                    "name": x.name,
                    "source": q.vertex_name(x.source),
                    "target": q.vertex_name(x.target),
                })).collect::<Vec<_>>(),
                "relations": relations,
                "dim": a.dim(),
                "nilpotency_degree": a.nilpotency_degree(),
                "normalized": normalized,
            })))
        }
        Command::Basis { from, to, .. } => {
            let from = from.map(|s| q.vertex(&s)).transpose()?;
            let to = to.map(|s| q.vertex(&s)).transpose()?;
            let paths: Vec<Value> = a
                .basis()
                .iter()
                .enumerate()
                .filter(|(_, p)| {
                    from.is_none_or(|f| p.source == f) && to.is_none_or(|t| p.target == t)
                })
                .map(|(i, p)| {
                    json!({
                        "index": i,
                        "path": p.display(q),
                        "source": q.vertex_name(p.source),
                        "target": q.vertex_name(p.target),
                        "length": p.len(),
                    })
                })
                .collect();
            Ok(Output::Json(
                json!({"dim": a.dim(), "count": paths.len(), "paths": paths}),
            ))
        }
        Command::Proj(_) => {
            let items: Vec<Value> = (0..a.num_vertices())
                .map(|v| {
                    let p = Representation::projective(a, v);
                    json!({
                        "vertex": q.vertex_name(v),
                        "dims": dims_json(&p),
                        "total_dim": p.total_dim(),
                        "top": top_dims(&p),
                        "socle": socle(&p).0.dims(),
                        "LL": loewy_length(&p),
                    })
                })
                .collect();
            Ok(Output::Json(json!({
                "LL": loewy_length(&Representation::regular(a)),
                "projectives": items,
            })))
        }
        Command::Resolve { module, .. } => {
            let m = ctx.module(&module)?;
            let res = minimal_resolution(&m, ctx.cutoff());
            res.validate()?;
            let terms: Vec<Value> = res
                .term_vertices
                .iter()
                .map(|vs| json!(ctx.names(vs)))
                .collect();
            let syz: Vec<Value> = res.syzygies.iter().map(dims_json).collect();
            Ok(Output::Json(json!({
                "module": module,
                "dims": dims_json(&m),
                "cutoff": ctx.cutoff(),
                "terms": terms,
                "syzygy_dims": syz,
                "truncated": res.truncated,
            })))
        }
        Command::Pd { module, .. } => {
            let cutoff = ctx.cutoff();
            let targets: Vec<(String, Representation<F>)> = match module {
                Some(spec) => vec![(spec.clone(), ctx.module(&spec)?)],
                None => (0..a.num_vertices())
                    .map(|v| {
                        (
                            format!("S({})", q.vertex_name(v)),
                            Representation::simple(a, v),
                        )
                    })
                    .collect(),
            };
            let mut items = Vec::new();
            for (label, m) in targets {
                let w = projective_dimension_with_witness(&m, cutoff, ctx.iso())?;
                items.push(json!({"module": label, "pd": w.result.to_string()}));
            }
            Ok(Output::Json(json!({"cutoff": cutoff, "results": items})))
        }
        Command::Layer { v, module, .. } => {
            let set = ctx.set(&v)?;
            let targets: Vec<(String, Representation<F>)> = match module {
                Some(spec) => vec![(spec.clone(), ctx.module(&spec)?)],
                None => (0..a.num_vertices())
                    .map(|i| {
                        (
                            format!("P({})", q.vertex_name(i)),
                            Representation::projective(a, i),
                        )
                    })
                    .collect(),
            };
            let items: Vec<Value> = targets
                .iter()
                .map(|(label, m)| {
                    let ll = layer_length(m, &set);
                    let layers: Vec<Value> = (0..=ll).map(|i| dims_json(&layer_functor(m, &set, i))).collect();
                    json!({"module": label, "layer_length": ll, "LL": loewy_length(m), "layers": layers})
                })
                .collect();
            Ok(Output::Json(json!({
                "V": set.names(a),
                "algebra_layer_length": algebra_layer_length(a, &set),
                "results": items,
            })))
        }
        Command::Torsion {
            v, module, emit, ..
        } => {
            let set = ctx.set(&v)?;
            let m = ctx.module(&module)?;
            let (t, incl) = torsion_radical(&m, &set);
            let (qm, _) = quotient(&incl);
            let mut out = json!({
                "V": set.names(a),
                "module": module,
                "dims": dims_json(&m),
                "torsion_dims": dims_json(&t),
                "quotient_dims": dims_json(&qm),
            });
            if emit {
                out["torsion_module"] = json!(emit_module(&t));
            }
            Ok(Output::Json(out))
        }
        Command::Bounds {
            v,
            certify,
            samples,
            ..
        } => {
            let set = ctx.set(&v)?;
            let cert = if certify {
                Some(build_certificate(&ctx, &set, samples)?)
            } else {
                None
            };
            let report = derived_dim_bounds(a, &set, ctx.cutoff(), cert.as_ref())?;
            Ok(Output::Json(
                serde_json::to_value(&report).expect("report serializes"),
            ))
        }
        Command::Certify {
            v, samples, chains, ..
        } => {
            let set = ctx.set(&v)?;
            let cert = build_certificate(&ctx, &set, samples)?;
            Ok(Output::Json(certificate_json(&cert, chains)))
        }
        Command::SearchV { cap, .. } => {
            let res = search_best_v(a, ctx.cutoff(), cap)?;
            Ok(Output::Json(
                serde_json::to_value(&res).expect("search result serializes"),
            ))
        }
        Command::Construct {
            what,
            module,
            v,
            k,
            i,
            m,
            n,
            verify_only,
            ..
        } => construct(&ctx, what, module, &v, k, i, m, n, verify_only),
        Command::Corpus { .. } => unreachable!("handled before parsing an algebra"),
    }
}

fn build_certificate<F: Field>(
    ctx: &Ctx<F>,
    set: &SimpleSet,
    samples: usize,
) -> Result<ItCertificate<F>> {
    let list = default_samples(&ctx.alg, samples, ctx.g.seed);
    let opts = CertifyOptions {
        cutoff: ctx.cutoff(),
        iso: ctx.iso(),
    };
    let cert = thm47_certificate(&ctx.alg, set, &list, opts)?;
    cert.verify()?;
    Ok(cert)
}

fn certificate_json<F: Field>(c: &ItCertificate<F>, chains: bool) -> Value {
    let evidence: Vec<Value> = c
        .evidence
        .iter()
        .map(|e| {
            let mut item = json!({
                "sample": e.label,
                "dims": dims_json(&e.module),
                "target_dims": dims_json(&e.chain.target),
                "length": e.chain.length(),
                "term_dims": e.chain.modules.iter().map(dims_json).collect::<Vec<_>>(),
                "parts_used": e.parts_used,
            });
            if chains {
                item["chain"] = chain_to_json(&e.chain);
            }
            item
        })
        .collect();
    json!({
        "m": c.m,
        "n": c.n,
        "bound": c.bound(),
        "generator": c.generator.iter().map(|p| json!({"part": p.label, "dims": dims_json(&p.module)})).collect::<Vec<_>>(),
        "samples_checked": c.evidence.len(),
        "evidence": evidence,
    })
}

fn ses_chain<F: Field>(ses: &ShortExactSequence<F>) -> LongExactChain<F> {
    LongExactChain {
        modules: vec![ses.middle().clone(), ses.left().clone()],
        maps: vec![ses.g.clone(), ses.f.clone()],
        target: ses.right().clone(),
    }
}

/// `0 -> rad^k M -> M -> M / rad^k M -> 0`.
fn radical_ses<F: Field>(m: &Representation<F>, k: usize) -> Result<ShortExactSequence<F>> {
    let (_, incl) = radical_power(m, k);
    let (_, proj) = quotient(&incl);
    ShortExactSequence::new(incl, proj)
}

#[allow(clippy::too_many_arguments)]
fn construct<F: Field>(
    ctx: &Ctx<F>,
    what: Option<What>,
    module: Option<String>,
    v: &str,
    k: usize,
    i: usize,
    m: Option<usize>,
    n: Option<usize>,
    verify_only: Option<PathBuf>,
) -> Result<Output> {
    let a = &ctx.alg;
    if let Some(path) = verify_only {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Parameter(format!("chain JSON: {e}")))?;
        let chain_value = value.get("chain").unwrap_or(&value);
        let chain = chain_from_json(a, chain_value)?;
        chain.validate()?;
        return Ok(Output::Json(
            json!({"valid": true, "terms": chain.modules.len()}),
        ));
    }
    let what =
        what.ok_or_else(|| Error::Parameter("construct needs --what or --verify-only".into()))?;
    let spec = module.ok_or_else(|| Error::Parameter("construct needs --module".into()))?;
    let mm = ctx.module(&spec)?;
    let out = match what {
        What::Horseshoe => {
            let ses = radical_ses(&mm, k)?;
            let h = horseshoe(&ses)?;
            json!({
                "what": "horseshoe",
                "input": chain_to_json(&ses_chain(&ses)),
                "middle_projective": ctx.names(&h.middle_vertices()),
                "chain": chain_to_json(&ses_chain(&h.syzygy_ses)),
            })
        }
        What::Shift => {
            let ses = radical_ses(&mm, k)?;
            let r = syzygy_shift_ses(&ses, i, ctx.iso())?;
            json!({
                "what": "shift",
                "i": i,
                "input": chain_to_json(&ses_chain(&ses)),
                "projective_summand": ctx.names(&r.q_vertices),
                "chain": chain_to_json(&ses_chain(&r.ses)),
            })
        }
        What::Loewy => {
            let r = loewy_resolution(&mm)?;
            r.chain.validate()?;
            json!({"what": "loewy", "budgets": r.budgets, "chain": chain_to_json(&r.chain)})
        }
        What::Thm47 => {
            let set = ctx.set(v)?;
            let opts = CertifyOptions {
                cutoff: ctx.cutoff(),
                iso: ctx.iso(),
            };
            let cert = thm47_certificate(a, &set, &[(spec.clone(), mm)], opts)?;
            cert.verify()?;
            let e = &cert.evidence[0];
            json!({
                "what": "thm47",
                "m": cert.m,
                "n": cert.n,
                "parts_used": e.parts_used,
                "chain": chain_to_json(&e.chain),
            })
        }
        What::CheckIt => {
            let set = ctx.set(v)?;
            let pd = pd_set(a, &set, ctx.cutoff())?
                .finite_value()
                .ok_or_else(|| Error::Hypothesis("pd V is not finite".into()))?;
            let ll = algebra_layer_length(a, &set) as i64;
            let lo = (pd + 1).max(0) as usize;
            let hi = (pd + ll - 1).max(pd + 1).max(0) as usize;
            let generator = syzygy_generator(a, lo..=hi);
            let m_len = m.unwrap_or((ll - 2).max(0) as usize);
            let n_shift = n.unwrap_or((pd + 2) as usize);
            let parts: Vec<Representation<F>> =
                generator.iter().map(|p| p.module.clone()).collect();
            match check_addv_resolution(&mm, &parts, m_len, n_shift)? {
                AddResolution::Certified(chain) => json!({
                    "what": "check-it",
                    "m": m_len,
                    "n": n_shift,
                    "certified": true,
                    "chain": chain_to_json(&chain),
                }),
                AddResolution::NotCertified(why) => json!({
                    "what": "check-it",
                    "m": m_len,
                    "n": n_shift,
                    "certified": false,
                    "reason": why,
                }),
            }
        }
    };
    Ok(Output::Json(out))
}

fn run(cli: Cli) -> Result<Output> {
    if let Command::Corpus { name, m, n, k } = &cli.command {
        let entry = corpus::generate(name, *m, *n, *k)?;
        for w in &entry.warnings {
            eprintln!("warning: {w}");
        }
        // Check that the generated text parses before emitting it.
        entry.build(PrimeField::default())?;
        return Ok(Output::Text(entry.text));
    }
    let text =
        read_algebra_text(algebra_arg(&cli.command).expect("non-corpus commands take an algebra"))?;
    let spec: FieldSpec = cli.global.field.parse()?;
    match spec {
        FieldSpec::Prime(p) => run_with(PrimeField::new(p)?, cli.global, cli.command, text),
        FieldSpec::Rationals => run_with(Rationals, cli.global, cli.command, text),
    }
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap would otherwise exit with 2,
    // which is reserved for hypothesis violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out_path = cli.global.out.clone();
    match run(cli) {
        Ok(out) => {
            let mut text = match out {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("JSON values serialize"),
                Output::Text(t) => t,
            };
            if !text.ends_with('\n') {
                text.push('\n');
            }
            match out_path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
