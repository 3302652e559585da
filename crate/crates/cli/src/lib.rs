//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit code: 0 on success, 1 for domain
//! errors, 2 for usage errors. Data goes to `out`, diagnostics to `err`.

mod args;

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use heegner_forge::bateman_horn::{approx_from_census, exact_constant, richness_report, EstimateMethod};
use heegner_forge::channels::{build_plan, export_plan_json, frequency_report};
use heegner_forge::density::{export_report, k_sweep, scan_family, ExportFormat};
use heegner_forge::keygen::{
    baseline_random_prime, generate_keypair, recover_zk, serialize_keypair, KeygenConfig,
};
use heegner_forge::optimizer::optimize;
use heegner_forge::polynomial::famous_catalog;
use heegner_forge::{Error, FamilyParams, HeegnerNumber, QuadraticPolynomial};

pub use args::{Cli, Command, OutputFormat};

/// Output of one subcommand: bytes for stdout plus optional stderr notes.
struct Rendered {
    stdout: Vec<u8>,
    notes: Vec<String>,
}

impl Rendered {
    fn text(s: String) -> Self {
        Rendered { stdout: s.into_bytes(), notes: Vec::new() }
    }

    fn bytes(b: Vec<u8>) -> Self {
        Rendered { stdout: b, notes: Vec::new() }
    }

    fn note(mut self, s: String) -> Self {
        self.notes.push(s);
        self
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };
    if cli.threads == 0 {
        let _ = writeln!(err, "error: --threads must be at least 1");
        return 2;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(r) => {
            for n in &r.notes {
                let _ = writeln!(err, "{n}");
            }
            if out.write_all(&r.stdout).and_then(|_| out.flush()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn heegner(h: i64) -> Result<HeegnerNumber, Error> {
    HeegnerNumber::new(h)
}

fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<Rendered, Error> {
    let mut b = serde_json::to_vec_pretty(v)?;
    b.push(b'\n');
    Ok(Rendered::bytes(b))
}

/// `field,value` CSV for single-record results.
fn kv_csv(rows: &[(&str, String)]) -> Rendered {
    let mut s = String::from("field,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{v}");
    }
    Rendered::text(s)
}

fn kv_table(rows: &[(&str, String)]) -> Rendered {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<w$}  {v}");
    }
    Rendered::text(s)
}

fn kv(format: OutputFormat, rows: &[(&str, String)], as_json: impl Serialize) -> Result<Rendered, Error> {
    match format {
        OutputFormat::Table => Ok(kv_table(rows)),
        OutputFormat::Csv => Ok(kv_csv(rows)),
        OutputFormat::Json => json(&as_json),
    }
}

fn dispatch(cli: &Cli) -> Result<Rendered, Error> {
    let fmt = cli.output_format;
    match &cli.command {
        Command::Scan { family, from, to } => {
            let params = FamilyParams::new(family.z.clone(), family.k.clone(), heegner(family.h)?);
            let report = scan_family(&params, *from, *to)?;
            match fmt {
                OutputFormat::Csv => Ok(Rendered::bytes(export_report(&report, ExportFormat::Csv)?)),
                OutputFormat::Json => Ok(Rendered::bytes(export_report(&report, ExportFormat::Json)?)),
                OutputFormat::Table => {
                    let mut s = format!("f(n) = {}\n", report.poly);
                    let _ = writeln!(s, "{:>8}  {:>24}  prime", "n", "f(n)");
                    for r in &report.records {
                        let _ = writeln!(s, "{:>8}  {:>24}  {}", r.n, r.value, if r.is_prime { "yes" } else { "no" });
                    }
                    let _ = writeln!(s, "primes: {}  composites: {}", report.prime_count, report.composite_count);
                    Ok(Rendered::text(s))
                }
            }
        }
        Command::Sweep { z, h, k_from, k_to, n_from, n_to } => {
            let entries = k_sweep(*z, heegner(*h)?, *k_from, *k_to, *n_from, *n_to)?;
            match fmt {
                OutputFormat::Json => json(&entries),
                OutputFormat::Csv | OutputFormat::Table => {
                    let mut s = if fmt == OutputFormat::Csv { "k,prime_count\n".to_string() } else { format!("{:>8}  primes\n", "k") };
                    for e in &entries {
                        if fmt == OutputFormat::Csv {
                            let _ = writeln!(s, "{},{}", e.k, e.prime_count);
                        } else {
                            let _ = writeln!(s, "{:>8}  {}", e.k, e.prime_count);
                        }
                    }
                    Ok(Rendered::text(s))
                }
            }
        }
        Command::Constant { family, cutoff } => {
            let params = FamilyParams::new(family.z.clone(), family.k.clone(), heegner(family.h)?);
            let poly = QuadraticPolynomial::construct(&params)?;
            let est = exact_constant(&poly, *cutoff)?;
            let product = match est.method {
                EstimateMethod::ExactProduct { euler_product, .. } => euler_product,
                EstimateMethod::DeltaApprox { .. } => f64::NAN,
            };
            #[derive(Serialize)]
            struct Out<'a> {
                poly: &'a QuadraticPolynomial,
                polynomial: String,
                cutoff: u64,
                constant: f64,
                euler_product: f64,
            }
            let rows = [
                ("polynomial", poly.to_string()),
                ("cutoff", cutoff.to_string()),
                ("constant", format!("{:.10}", est.constant)),
                ("euler_product", format!("{product:.10}")),
            ];
            kv(fmt, &rows, Out { poly: &poly, polynomial: poly.to_string(), cutoff: *cutoff, constant: est.constant, euler_product: product })
        }
        Command::Approx { h, x, delta_p } => {
            let (census, est) = approx_from_census(heegner(*h)?, *x, *delta_p)?;
            let used = match est.method {
                EstimateMethod::DeltaApprox { delta_p, .. } => delta_p,
                EstimateMethod::ExactProduct { .. } => f64::NAN,
            };
            #[derive(Serialize)]
            struct Out<'a> {
                census: &'a heegner_forge::bateman_horn::ResidueCensus,
                pr_qr: f64,
                pr_nqr: f64,
                delta_p_used: f64,
                constant: f64,
            }
            let rows = [
                ("H", census.h.to_string()),
                ("x", census.x.to_string()),
                ("qr_count", census.qr_count.to_string()),
                ("nqr_count", census.nqr_count.to_string()),
                ("delta_p", format!("{:.10}", census.delta_p)),
                ("delta_p_used", format!("{used:.10}")),
                ("constant", format!("{:.10}", est.constant)),
            ];
            kv(fmt, &rows, Out { census: &census, pr_qr: census.pr_qr(), pr_nqr: census.pr_nqr(), delta_p_used: used, constant: est.constant })
        }
        Command::Richness { family, from, to, cutoff } => {
            let params = FamilyParams::new(family.z.clone(), family.k.clone(), heegner(family.h)?);
            let poly = QuadraticPolynomial::construct(&params)?;
            let r = richness_report(&poly, *from, *to, *cutoff)?;
            let rows = [
                ("polynomial", poly.to_string()),
                ("range", format!("[{from}, {to}]")),
                ("actual", r.actual.to_string()),
                ("expected", format!("{:.6}", r.expected)),
                ("ratio", format!("{:.6}", r.ratio)),
                ("constant", format!("{:.10}", r.constant)),
            ];
            kv(fmt, &rows, &r)
        }
        Command::Optimize { from, to, h, sweep_window } => {
            let r = optimize(*from, *to, heegner(*h)?, *sweep_window)?;
            match fmt {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => {
                    let mut s = String::from("kind,zk,prime_count,composite_count\n");
                    for c in &r.scored {
                        let _ = writeln!(s, "candidate,{},{},{}", c.zk, c.prime_count, c.composite_count);
                    }
                    for c in r.sweep.iter().flatten() {
                        let _ = writeln!(s, "sweep,{},{},{}", c.zk, c.prime_count, c.composite_count);
                    }
                    Ok(Rendered::text(s))
                }
                OutputFormat::Table => {
                    let mut s = format!("range [{}, {}]\n", r.n_lo, r.n_hi);
                    for c in &r.scored {
                        let _ = writeln!(s, "candidate Zk = {:<8} primes {:<6} composites {}", c.zk, c.prime_count, c.composite_count);
                    }
                    let _ = writeln!(s, "heuristic optimum: Zk = {} ({} primes)", r.best.zk, r.best.prime_count);
                    if let Some(e) = &r.empirical_best {
                        let _ = writeln!(s, "empirical optimum: Zk = {} ({} primes)", e.zk, e.prime_count);
                    }
                    Ok(Rendered::text(s))
                }
            }
        }
        Command::Keygen { h, min_bits, z_lo, z_hi, k_lo, k_hi, max_attempts, single_round, out } => {
            let mut config = KeygenConfig {
                h: heegner(*h)?,
                min_bits: *min_bits,
                z_range: (z_lo.clone(), z_hi.clone()),
                k_range: (k_lo.clone(), k_hi.clone()),
                max_attempts: *max_attempts,
                rng_seed: cli.seed,
                ..KeygenConfig::default()
            };
            if *single_round {
                config = config.single_round();
            }
            let start = Instant::now();
            let kp = generate_keypair(&config, &mut rng(config.rng_seed))?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let secret = serialize_keypair(&kp, true)?;
            let public = serialize_keypair(&kp, false)?;
            let timing = format!(
                "structured key pair: p1 {} bits, p2 {} bits, N {} bits, {elapsed:.2} ms",
                kp.sp1.p.bits(),
                kp.sp2.p.bits(),
                kp.n.bits()
            );
            let shown = match out {
                Some(path) => {
                    std::fs::write(path, &secret)?;
                    public
                }
                None => secret,
            };
            let rendered = match fmt {
                OutputFormat::Json => Rendered::bytes(shown),
                _ => {
                    let v: serde_json::Value = serde_json::from_slice(&shown)?;
                    let obj = v.as_object().cloned().unwrap_or_default();
                    let rows: Vec<(&str, String)> = ["H", "N", "Z1", "k1", "p1", "Z2", "k2", "p2"]
                        .iter()
                        .filter_map(|&k| obj.get(k).map(|x| (k, x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))))
                        .collect();
                    if fmt == OutputFormat::Csv { kv_csv(&rows) } else { kv_table(&rows) }
                }
            };
            Ok(rendered.note(timing))
        }
        Command::Recover { p, h } => {
            let zk = recover_zk(p, heegner(*h)?)?;
            #[derive(Serialize)]
            struct Out {
                p: String,
                #[serde(rename = "H")]
                h: i64,
                #[serde(rename = "Zk")]
                zk: String,
            }
            let rows = [("p", p.to_string()), ("H", h.to_string()), ("Zk", zk.to_string())];
            kv(fmt, &rows, Out { p: p.to_string(), h: *h, zk: zk.to_string() })
        }
        Command::Channels { n2, h } => {
            let plan = build_plan(*n2, heegner(*h)?)?;
            match fmt {
                OutputFormat::Json => Ok(Rendered::bytes(export_plan_json(&plan)?)),
                OutputFormat::Csv => {
                    let mut s = String::from("channel_a,channel_b,frequency,is_prime\n");
                    for e in frequency_report(&plan) {
                        let _ = writeln!(s, "{},{},{},{}", e.pair.0, e.pair.1, e.frequency, e.is_prime);
                    }
                    Ok(Rendered::text(s))
                }
                OutputFormat::Table => {
                    let mut s = format!("f(n) = {}  (Zk = {})\n", plan.poly, plan.zk);
                    for e in frequency_report(&plan) {
                        let pair = format!("[{},{}]", e.pair.0, e.pair.1);
                        let _ = writeln!(s, "{pair:<16} {:>20}  {}", e.frequency, if e.is_prime { "prime" } else { "composite" });
                    }
                    Ok(Rendered::text(s))
                }
            }
        }
        Command::Catalog => {
            let entries = famous_catalog();
            match fmt {
                OutputFormat::Json => json(&entries),
                OutputFormat::Csv => {
                    let mut s = String::from("name,Z,k,H,polynomial\n");
                    for e in &entries {
                        let _ = writeln!(s, "{},{},{},{},{}", e.name, e.params.z, e.params.k, e.params.h, e.poly);
                    }
                    Ok(Rendered::text(s))
                }
                OutputFormat::Table => {
                    let mut s = String::new();
                    for e in &entries {
                        let _ = writeln!(s, "{:<10} Z={} k={} H={:<4} {}", e.name, e.params.z, e.params.k, e.params.h, e.poly);
                    }
                    Ok(Rendered::text(s))
                }
            }
        }
        Command::Baseline { bits } => {
            let start = Instant::now();
            let p: BigUint = baseline_random_prime(*bits, &mut rng(cli.seed))?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let timing = format!("baseline prime: {bits} bits, {elapsed:.2} ms");
            #[derive(Serialize)]
            struct Out {
                bits: u64,
                prime: String,
            }
            let rows = [("bits", bits.to_string()), ("prime", p.to_string())];
            let r = kv(fmt, &rows, Out { bits: *bits, prime: p.to_string() })?;
            Ok(r.note(timing))
        }
    }
}
