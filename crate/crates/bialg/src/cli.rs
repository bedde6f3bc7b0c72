use std::time::Instant;

use clap::{error::ErrorKind, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bigbracket::Shift;
use crate::error::{Error, Result};
use crate::io::{
    lie_to_json, matrix_to_json, parse_index_list, parse_lie, parse_matrix, parse_signature, parse_tensor, parse_triple_blocks,
    tensor_header, tensor_to_json, triple_to_json,
};
use crate::ledger::ConventionLedger;
use crate::lie::{invariants, sl2, sl3, split_subalgebra, LieAlgebra, Module, SplitSubalgebra};
use crate::manin::{check_quadratic, double_algebra, drinfeld_double, dual_subalgebra_bplus_bminus, triple_to_bialgebra, ManinTriple, QuadraticLieAlgebra};
use crate::mc::{mc_residual, pol_bg, LElement};
use crate::qlb::{
    as_symmetric, casimir_bracket, casimir_to_phi, check_qlb, coboundary_preimage, coisotropic_casimir_check, induce_from_coisotropic,
    invariance_residual, twist, verify_coisotropic_morphism, QlbResiduals, QuasiLieBialgebra,
};
use crate::rmatrix::{dynamical_check, quasitriangular_check, CheckLine, DynamicalRMatrix, CYBE_LAMBDA_FACTOR};
use crate::tensor::{SlotGroup, SparseTensor};

#[derive(Parser, Debug)]
#[command(name = "bialg", version, about = "Exact checks for Lie bialgebras, quasi-Lie bialgebras, r-matrices and Manin triples")]
pub struct Cli {
    /// emit the structured JSON report
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// antisymmetry and Jacobi of a Lie algebra file
    CheckLie { file: String },
    /// the three quasi-Lie bialgebra axioms
    CheckQlb {
        file: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        phi: String,
    },
    /// twist (δ, φ) by λ ∈ ∧²g
    Twist {
        file: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        lambda: String,
    },
    /// associator φ(c) of an invariant symmetric c
    CasimirPhi {
        file: String,
        #[arg(long)]
        casimir: String,
    },
    /// quasi-Lie bialgebra induced on a coisotropic subalgebra
    Induce {
        file: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        casimir: String,
    },
    /// split invariance identities and the morphism check for a coisotropic subalgebra
    VerifyMorphism {
        file: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        casimir: String,
    },
    /// classical Yang-Baxter equation and quasi-triangularity
    Cybe {
        file: String,
        #[arg(long)]
        r: String,
    },
    /// dynamical r-matrix over a subalgebra h with coordinates dual to h
    Dynamical {
        file: String,
        #[arg(long)]
        sub: Option<String>,
        #[arg(long)]
        r: String,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Drinfeld double of a Lie bialgebra
    Double {
        file: String,
        #[arg(long)]
        delta: String,
    },
    /// Manin triple invariants
    TripleCheck {
        file: String,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        gstar: Option<String>,
        #[arg(long)]
        pairing: Option<String>,
    },
    /// the standard triple (g ⊕ g, Δ(g), b₊ ⊕ b₋ part)
    StdTriple {
        #[arg(long, value_parser = ["sl2", "sl3"])]
        algebra: String,
    },
    /// invariant tensors of a Lie algebra
    Invariants {
        file: String,
        #[arg(long, value_parser = ["sym2", "wedge3"])]
        module: String,
    },
    /// dx + ½[x, x] in Pol(Bg, n)
    McResidual {
        file: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        shift: u8,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        /// symmetric 2-tensor, the degree-one datum for n = 2
        #[arg(long)]
        casimir: Option<String>,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::CheckLie { .. } => "check-lie",
            Cmd::CheckQlb { .. } => "check-qlb",
            Cmd::Twist { .. } => "twist",
            Cmd::CasimirPhi { .. } => "casimir-phi",
            Cmd::Induce { .. } => "induce",
            Cmd::VerifyMorphism { .. } => "verify-morphism",
            Cmd::Cybe { .. } => "cybe",
            Cmd::Dynamical { .. } => "dynamical",
            Cmd::Double { .. } => "double",
            Cmd::TripleCheck { .. } => "triple-check",
            Cmd::StdTriple { .. } => "std-triple",
            Cmd::Invariants { .. } => "invariants",
            Cmd::McResidual { .. } => "mc-residual",
        }
    }
}

pub struct Response {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Default)]
struct Run {
    inputs: Vec<Value>,
    checks: Vec<Value>,
    output: Map<String, Value>,
}

fn sig(s: &str) -> Vec<SlotGroup> {
    parse_signature(s).expect("built-in signature")
}

impl Run {
    fn read(&mut self, path: &str) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(json!({"path": path, "sha256": hex}));
        String::from_utf8(bytes).map_err(|_| Error::Parse(format!("{path}: not UTF-8")))
    }

    fn check(&mut self, name: &str, pass: bool, detail: Value) -> bool {
        self.checks.push(json!({"name": name, "status": if pass { "pass" } else { "fail" }, "detail": detail}));
        pass
    }

    fn out(&mut self, key: &str, v: Value) {
        self.output.insert(key.into(), v);
    }

    fn lie(&mut self, path: &str) -> Result<LieAlgebra> {
        Ok(self.lie_and_source(path)?.0)
    }

    fn lie_and_source(&mut self, path: &str) -> Result<(LieAlgebra, String)> {
        let src = self.read(path)?;
        let g = parse_lie(&src).map_err(|e| at(path, e))?;
        let c = g.check();
        self.check("lie-algebra", c.pass, to_value(&c));
        Ok((g, src))
    }

    fn tensor(&mut self, path: &str, g: &LieAlgebra, allowed: &[&str]) -> Result<SparseTensor> {
        let src = self.read(path)?;
        let vars = g.field().vars().to_vec();
        parse_allowed(&src, g, allowed, &vars).map_err(|e| at(path, e))
    }
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        Error::Input(m) => Error::Input(format!("{path}: {m}")),
        other => other,
    }
}

/// A bare list takes the first allowed signature; a declared one must be among them.
fn parse_allowed(src: &str, g: &LieAlgebra, allowed: &[&str], vars: &[String]) -> Result<SparseTensor> {
    let first = sig(allowed[0]);
    match parse_tensor(src, g, None, vars) {
        Ok(t) => {
            if allowed.iter().any(|a| sig(a) == t.groups()) {
                Ok(t)
            } else {
                Err(Error::Parse(format!("signature must be one of {allowed:?}")))
            }
        }
        Err(Error::Parse(m)) if m.contains("no signature") => parse_tensor(src, g, Some(&first), vars),
        Err(e) => Err(e),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

fn lit(t: &SparseTensor, g: &LieAlgebra) -> Value {
    tensor_to_json(t, g, g.field().vars())
}

fn lit_vars(t: &SparseTensor, g: &LieAlgebra, vars: &[String]) -> Value {
    tensor_to_json(t, g, vars)
}

fn qlb_checks(run: &mut Run, prefix: &str, r: &QlbResiduals, g: &LieAlgebra) -> bool {
    let a = run.check(&format!("{prefix}cocycle"), r.cocycle.is_zero(), json!({"residual": lit(&r.cocycle, g)}));
    let b = run.check(&format!("{prefix}jacobi"), r.jacobi.is_zero(), json!({"residual": lit(&r.jacobi, g)}));
    let c = run.check(&format!("{prefix}compatibility"), r.compatibility.is_zero(), json!({"residual": lit(&r.compatibility, g)}));
    a && b && c
}

fn check_line(run: &mut Run, name: &str, l: &CheckLine) {
    run.check(name, l.pass, json!({"residual": l.residual}));
}

fn split(g: &LieAlgebra, sub: &str) -> Result<SplitSubalgebra> {
    let h = parse_index_list(g, sub)?;
    let m: Vec<usize> = (0..g.dim()).filter(|i| !h.contains(i)).collect();
    split_subalgebra(g, &h, &m)
}

fn casimir(run: &mut Run, path: &str, g: &LieAlgebra) -> Result<SparseTensor> {
    let c = run.tensor(path, g, &["tensor2", "sym2"])?;
    as_symmetric(&c).map_err(|e| at(path, e))
}

fn dispatch(cmd: &Cmd, run: &mut Run) -> Result<()> {
    match cmd {
        Cmd::CheckLie { file } => {
            let g = run.lie(file)?;
            run.out("name", json!(g.name()));
            run.out("dim", json!(g.dim()));
            run.out("basis", json!(g.basis()));
        }
        Cmd::CheckQlb { file, delta, phi } => {
            let g = run.lie(file)?;
            let d = run.tensor(delta, &g, &["cobracket"])?;
            let p = run.tensor(phi, &g, &["wedge3"])?;
            let q = QuasiLieBialgebra::new(g.clone(), d, p)?;
            qlb_checks(run, "", &check_qlb(&q), &g);
        }
        Cmd::Twist { file, delta, phi, lambda } => {
            let g = run.lie(file)?;
            let d = run.tensor(delta, &g, &["cobracket"])?;
            let p = run.tensor(phi, &g, &["wedge3"])?;
            let l = run.tensor(lambda, &g, &["wedge2"])?;
            let q = QuasiLieBialgebra::new(g.clone(), d, p)?;
            if !qlb_checks(run, "input-", &check_qlb(&q), &g) {
                return Ok(());
            }
            let t = twist(&q, &l)?;
            qlb_checks(run, "twisted-", &check_qlb(&t), &g);
            let back = twist(&t, &l.neg())?;
            let same = back.delta == q.delta && back.phi == q.phi;
            run.check("inverse-twist", same, json!({"delta": lit(&back.delta, &g), "phi": lit(&back.phi, &g)}));
            run.out("delta", lit(&t.delta, &g));
            run.out("phi", lit(&t.phi, &g));
        }
        Cmd::CasimirPhi { file, casimir: path } => {
            let g = run.lie(file)?;
            let c = casimir(run, path, &g)?;
            let inv = invariance_residual(&g, &c)?;
            run.out("c", lit(&c, &g));
            if !run.check("invariant", inv.is_zero(), json!({"residual": lit(&inv, &g)})) {
                return Ok(());
            }
            let phi = casimir_to_phi(&g, &c)?;
            let dphi = invariance_of_wedge3(&g, &phi)?;
            run.check("phi-invariant", dphi.is_zero(), json!({"residual": lit(&dphi, &g)}));
            let q = QuasiLieBialgebra::new(g.clone(), SparseTensor::cobracket(g.dim()), phi.clone())?;
            qlb_checks(run, "", &check_qlb(&q), &g);
            run.out("bracket_c12_c23", lit(&casimir_bracket(&g, &c), &g));
            run.out("phi", lit(&phi, &g));
        }
        Cmd::Induce { file, sub, casimir: path } => {
            let g = run.lie(file)?;
            let s = split(&g, sub)?;
            let c = casimir(run, path, &g)?;
            let inv = invariance_residual(&g, &c)?;
            let ok_inv = run.check("invariant", inv.is_zero(), json!({"residual": lit(&inv, &g)}));
            let co = coisotropic_casimir_check(&s, &c)?;
            let ok_co = run.check("coisotropic", co.pass, json!({"residual": lit(&co.residual, &g)}));
            if !(ok_inv && ok_co) {
                return Ok(());
            }
            let q = induce_from_coisotropic(&s, &c)?;
            qlb_checks(run, "", &check_qlb(&q), &q.g);
            run.out("h", lie_to_json(&q.g));
            run.out("delta", lit(&q.delta, &q.g));
            run.out("phi", lit(&q.phi, &q.g));
        }
        Cmd::VerifyMorphism { file, sub, casimir: path } => {
            let g = run.lie(file)?;
            let s = split(&g, sub)?;
            let c = casimir(run, path, &g)?;
            let co = coisotropic_casimir_check(&s, &c)?;
            if !run.check("coisotropic", co.pass, json!({"residual": lit(&co.residual, &g)})) {
                return Ok(());
            }
            let rep = verify_coisotropic_morphism(&s, &c)?;
            run.check("casimir-invariance-identities", rep.identities_pass, to_value(&rep.identities));
            run.check("equivalence-with-invariance", rep.equivalence.pass, to_value(&rep.equivalence));
            run.check("morphism", rep.morphism.pass, to_value(&rep.morphism));
        }
        Cmd::Cybe { file, r } => {
            let g = run.lie(file)?;
            let r = run.tensor(r, &g, &["tensor2", "sym2", "wedge2"])?;
            let rep = quasitriangular_check(&g, &r)?;
            run.check("cybe", rep.cybe_residual.is_zero(), json!({"residual": lit(&rep.cybe_residual, &g)}));
            let inv = invariance_residual(&g, &rep.c)?;
            run.check("symmetric-part-invariant", rep.c_invariant, json!({"residual": lit(&inv, &g)}));
            if let Some(lf) = &rep.lambda_form_residual {
                run.check("lambda-form", rep.lambda_form_holds, json!({"residual": lit(lf, &g)}));
            }
            run.check("criteria-agree", rep.criteria_agree, json!({"quasitriangular": rep.pass, "lambda_form": rep.lambda_form_holds}));
            run.out("lambda", lit(&rep.lambda, &g));
            run.out("c", lit(&rep.c, &g));
            run.out("kappa0", json!(CYBE_LAMBDA_FACTOR));
        }
        Cmd::Dynamical { file, sub, r, vars } => {
            let g = run.lie(file)?;
            let src = run.read(r)?;
            let header = tensor_header(&src).map_err(|e| at(r, e))?;
            let h_labels: Vec<String> = match (sub, &header.h) {
                (Some(s), Some(h)) => {
                    let from_flag: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
                    if &from_flag != h {
                        return Err(Error::Parse(format!("--sub {s} disagrees with the file header h = {h:?}")));
                    }
                    from_flag
                }
                (Some(s), None) => s.split(',').map(|x| x.trim().to_string()).collect(),
                (None, Some(h)) => h.clone(),
                (None, None) => return Err(Error::Parse("dynamical needs --sub or an \"h\" header".into())),
            };
            let names: Vec<String> = match (vars, &header.vars) {
                (Some(s), Some(v)) => {
                    let from_flag: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
                    if &from_flag != v {
                        return Err(Error::Parse(format!("--vars {s} disagrees with the file header vars = {v:?}")));
                    }
                    from_flag
                }
                (Some(s), None) => s.split(',').map(|x| x.trim().to_string()).collect(),
                (None, Some(v)) => v.clone(),
                (None, None) => return Err(Error::Parse("dynamical needs --vars or a \"vars\" header".into())),
            };
            let s = split(&g, &h_labels.join(","))?;
            let rt = parse_allowed(&src, &g, &["tensor2", "sym2", "wedge2"], &names).map_err(|e| at(r, e))?;
            let d = DynamicalRMatrix::new(s, names.clone(), rt, None)?;
            let rep = dynamical_check(&d)?;
            check_line(run, "equivariance", &rep.equivariance);
            check_line(run, "symmetric-part", &rep.symmetric_part);
            check_line(run, "cdybe", &rep.cdybe);
            check_line(run, "lambda-form", &rep.lambda_form);
            run.check("criteria-agree", rep.criteria_agree, json!({"cdybe": rep.cdybe.pass, "lambda_form": rep.lambda_form.pass}));
            run.out("h", json!(h_labels));
            run.out("vars", json!(names));
            run.out("r", lit_vars(&d.r, &g, &names));
            run.out("singular_locus", json!(d.locus.iter().map(|p| p.fmt_with(&names)).collect::<Vec<_>>()));
        }
        Cmd::Double { file, delta } => {
            let g = run.lie(file)?;
            let d = run.tensor(delta, &g, &["cobracket"])?;
            let b = QuasiLieBialgebra::new(g.clone(), d, SparseTensor::multivector(g.dim(), 3))?;
            let q = double_algebra(&b)?;
            let jac = q.d.check();
            run.check("double-jacobi", jac.pass, to_value(&jac));
            let quad = check_quadratic(&q.d, &q.pairing)?;
            run.check("double-pairing", quad.pass, to_value(&quad));
            let star: Vec<String> = g.basis().iter().map(|l| format!("{l}*")).collect();
            run.out("double", triple_to_json(&q.d, &q.pairing, g.basis(), &star));
            if jac.pass && check_qlb(&b).pass() {
                let t = drinfeld_double(&b)?;
                let tc = t.check()?;
                run.check("manin-triple", tc.pass, to_value(&tc));
                let back = triple_to_bialgebra(&t)?;
                run.check("round-trip", back.delta == b.delta, json!({"delta": lit(&back.delta, &back.g)}));
            }
        }
        Cmd::TripleCheck { file, g, gstar, pairing } => {
            let (d, src) = run.lie_and_source(file)?;
            let blocks = parse_triple_blocks(&src).map_err(|e| at(file, e))?;
            let labels = |flag: &Option<String>, block: &Option<Vec<String>>, what: &str| -> Result<String> {
                match (flag, block) {
                    (Some(s), _) => Ok(s.clone()),
                    (None, Some(b)) => Ok(b.join(",")),
                    (None, None) => Err(Error::Parse(format!("triple-check needs --{what} or a \"{what}\" block"))),
                }
            };
            let gi = parse_index_list(&d, &labels(g, &blocks.g, "g")?)?;
            let gsi = parse_index_list(&d, &labels(gstar, &blocks.gstar, "gstar")?)?;
            let m = match (pairing, blocks.pairing) {
                (Some(p), _) => {
                    let s = run.read(p)?;
                    parse_matrix(&s).map_err(|e| at(p, e))?
                }
                (None, Some(m)) => m,
                (None, None) => return Err(Error::Parse("triple-check needs --pairing or a \"pairing\" block".into())),
            };
            if m.len() != d.dim() {
                return Err(Error::Input(format!("pairing must be {0}×{0}", d.dim())));
            }
            let q = QuadraticLieAlgebra { d: d.clone(), pairing: m };
            let t = ManinTriple {
                g: q.unit_span(&gi)?,
                gstar: q.unit_span(&gsi)?,
                g_labels: gi.iter().map(|&i| d.basis()[i].clone()).collect(),
                q,
            };
            let tc = t.check()?;
            if run.check("manin-triple", tc.pass, to_value(&tc)) {
                let b = triple_to_bialgebra(&t)?;
                qlb_checks(run, "bialgebra-", &check_qlb(&b), &b.g);
                run.out("g", lie_to_json(&b.g));
                run.out("delta", lit(&b.delta, &b.g));
            }
        }
        Cmd::StdTriple { algebra } => {
            let g = if algebra == "sl2" { sl2() } else { sl3() };
            let t = dual_subalgebra_bplus_bminus(&g)?;
            let tc = t.check()?;
            run.check("manin-triple", tc.pass, to_value(&tc));
            let b = triple_to_bialgebra(&t)?;
            qlb_checks(run, "bialgebra-", &check_qlb(&b), &b.g);
            let l = coboundary_preimage(&b.g, &b.delta)?;
            run.check("coboundary", l.is_some(), json!({"lambda": l.as_ref().map(|l| lit(l, &b.g))}));
            if check_qlb(&b).pass() {
                let back = triple_to_bialgebra(&drinfeld_double(&b)?)?;
                run.check("double-round-trip", back.delta == b.delta, json!({"delta": lit(&back.delta, &b.g)}));
            }
            run.out("double", lie_to_json(&t.q.d));
            run.out("pairing", matrix_to_json(&t.q.pairing));
            run.out("g_rows", matrix_to_json(&t.g));
            run.out("gstar_rows", matrix_to_json(&t.gstar));
            run.out("delta", lit(&b.delta, &b.g));
        }
        Cmd::Invariants { file, module } => {
            let g = run.lie(file)?;
            let m = Module::parse(module)?;
            let basis = invariants(&g, m)?;
            run.out("module", json!(module));
            run.out("dimension", json!(basis.len()));
            run.out("basis", Value::Array(basis.iter().map(|t| lit(t, &g)).collect()));
        }
        Cmd::McResidual { file, shift, delta, phi, casimir: cpath } => {
            let g = run.lie(file)?;
            let shift = Shift::from_int(*shift as usize)?;
            let l = pol_bg(&g, shift)?;
            let d = delta.as_ref().map(|p| run.tensor(p, &g, &["cobracket"])).transpose()?;
            let p = phi.as_ref().map(|p| run.tensor(p, &g, &["wedge3"])).transpose()?;
            let c = cpath.as_ref().map(|p| casimir(run, p, &g)).transpose()?;
            let mut x = LElement::default();
            for t in d.iter().chain(&p).chain(&c) {
                x = x.add(&l.element_from_tensor(t)?);
            }
            let res = mc_residual(&l, &x)?;
            let parts: Vec<Value> = res
                .parts
                .iter()
                .map(|(&(k, w), t)| json!({"ce_degree": k, "weight": w, "tensor": lit(t, &g)}))
                .collect();
            run.check("mc-equation", res.is_zero(), json!({"residual": parts}));
            if shift == Shift::One && c.is_none() {
                let n = g.dim();
                let q = QuasiLieBialgebra::new(
                    g.clone(),
                    d.unwrap_or_else(|| SparseTensor::cobracket(n)),
                    p.unwrap_or_else(|| SparseTensor::multivector(n, 3)),
                )?;
                let qr = check_qlb(&q);
                let same = |k, w, t: &SparseTensor| res.part(k, w).cloned() == (!t.is_zero()).then(|| t.clone());
                let agree = res.is_zero() == qr.pass()
                    && same(2, 2, &qr.cocycle)
                    && same(1, 3, &qr.jacobi)
                    && same(0, 4, &qr.compatibility);
                run.check("direct-oracle-agrees", agree, json!({"check_qlb": qr.pass()}));
            }
            run.out("window", to_value(&l.window));
        }
    }
    Ok(())
}

/// d of a 3-vector seen as a 0-cochain.
fn invariance_of_wedge3(g: &LieAlgebra, phi: &SparseTensor) -> Result<SparseTensor> {
    let x = crate::lie::CECochain::new(0, Module::Wedge(3), phi.clone())?;
    Ok(crate::lie::ce_differential(g, &x)?.tensor)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) => 1,
        _ => 2,
    }
}

pub fn run<I, T>(args: I) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Response { stdout: text, stderr: String::new(), code: 0 },
                _ => Response { stdout: String::new(), stderr: text, code: 2 },
            };
        }
    };
    let start = Instant::now();
    let mut r = Run::default();
    let result = dispatch(&cli.cmd, &mut r);
    let all_pass = r.checks.iter().all(|c| c["status"] == "pass");
    let (status, code, error) = match &result {
        Ok(()) if all_pass => ("pass", 0, None),
        Ok(()) => ("fail", 1, None),
        Err(e) => (if exit_code(e) == 1 { "fail" } else { "error" }, exit_code(e), Some(e.to_string())),
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(cli.cmd.name()));
    report.insert("args".into(), json!(argv.get(1..).unwrap_or_default()));
    report.insert("status".into(), json!(status));
    if let Some(e) = &error {
        report.insert("error".into(), json!(e));
    }
    report.insert("checks".into(), Value::Array(r.checks));
    report.insert("output".into(), Value::Object(r.output));
    report.insert("inputs".into(), Value::Array(r.inputs));
    report.insert("ledger".into(), to_value(&ConventionLedger::current()));
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    report.insert("timing_ms".into(), json!((ms * 1000.0).round() / 1000.0));
    let report = Value::Object(report);
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        render_text(&report)
    };
    let stderr = error.map(|e| format!("bialg: {e}\n")).unwrap_or_default();
    Response { stdout, stderr, code }
}

fn is_tensor_literal(v: &Value) -> bool {
    v.get("signature").is_some() && v.get("entries").is_some_and(Value::is_array)
}

fn tensor_text(v: &Value) -> String {
    let entries = v["entries"].as_array().expect("entries");
    if entries.is_empty() {
        return format!("0 ({})", v["signature"].as_str().unwrap_or("?"));
    }
    let terms: Vec<String> = entries
        .iter()
        .map(|e| {
            let idx: Vec<&str> = e["idx"].as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
            format!("({})[{}]", e["coef"].as_str().unwrap_or("?"), idx.join(" "))
        })
        .collect();
    format!("{} ({})", terms.join(" + "), v["signature"].as_str().unwrap_or("?"))
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")))
        }
        v if is_tensor_literal(v) => Some(tensor_text(v)),
        _ => None,
    }
}

fn render(key: &str, v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    if let Some(s) = scalar_text(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render(k, x, indent + 1, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                render(&format!("[{i}]"), x, indent + 1, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

/// Same content as the JSON report, laid out for reading.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let args: Vec<&str> = report["args"].as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
    out.push_str(&format!("command: {}\n", args.join(" ")));
    out.push_str(&format!("status: {}\n", report["status"].as_str().unwrap_or("?")));
    if let Some(e) = report.get("error") {
        out.push_str(&format!("error: {}\n", e.as_str().unwrap_or("?")));
    }
    for c in report["checks"].as_array().into_iter().flatten() {
        let tag = if c["status"] == "pass" { "PASS" } else { "FAIL" };
        out.push_str(&format!("[{tag}] {}\n", c["name"].as_str().unwrap_or("?")));
        if let Value::Object(m) = &c["detail"] {
            for (k, x) in m {
                render(k, x, 1, &mut out);
            }
        } else {
            render("detail", &c["detail"], 1, &mut out);
        }
    }
    for (k, v) in report["output"].as_object().into_iter().flatten() {
        render(k, v, 0, &mut out);
    }
    render("inputs", &report["inputs"], 0, &mut out);
    render("ledger", &report["ledger"], 0, &mut out);
    render("timing_ms", &report["timing_ms"], 0, &mut out);
    out
}
