use std::fs;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use mfw_core::findim::{
    check_frobenius, from_presentation, hh0, hochschild_cohomology_dims, radical_and_blocks,
    socle_algebra, AlgebraError, Blocks, FinDimAlgebra, FrobeniusVerdict,
};
use mfw_core::linalg::QMatrix;
use mfw_core::mf::{
    boundary_bulk, builtin_family, chern_character, contraction_algebra_with_options,
    euler_pairing, evaluate_endomorphism, frobenius_pairing, homotopic, laufer_generators,
    morphism_check, Composition, ContractionAlgebraResult, Family, HomotopyVerdict, JetOptions,
    MatrixFactorization, MfError, MfMorphism,
};
use mfw_core::milnor::{
    grothendieck_residue, is_quasihomogeneous, milnor_algebra_with_budget, mult_by_w_matrix,
    residue_pairing, socle_milnor, MilnorAlgebra, MilnorError,
};
use mfw_core::poly::{parse_poly, MonomialOrder, Poly, PolyMatrix, RingSpec};
use mfw_core::series::{dim_check, gv_expand, gv_invert, hh0_from_gv, IntSeries, SeriesError};
use mfw_core::stdbasis::{Budget, StdBasisError};
use mfw_core::{parse_rational, Q};

use crate::report::Report;
use crate::{
    AlgebraCommand, AlgebraSource, Cli, CliError, Command, ExampleArgs, FamilyArg, MfCommand,
    MfSource, MorphismArgs, OrderArg, PotentialArgs, PresentationArgs, SeriesCommand,
};

pub fn run(cli: Cli) -> Result<Report, CliError> {
    let budgets = Budgets::from_env()?;
    match cli.command {
        Command::Milnor(args) => milnor(&args, &budgets),
        Command::Residue(args) => residue(&args.potential, &args.f, args.g.as_deref(), &budgets),
        Command::Mf(cmd) => mf(cmd, &budgets),
        Command::Algebra(cmd) => algebra(cmd),
        Command::Series(cmd) => series(cmd),
        Command::Example(args) => example(&args, &budgets),
    }
}

/// Computation caps; `MFW_BUDGET=N` sets both the pair cap and the unknown cap to `N`.
struct Budgets {
    std: Budget,
    max_unknowns: usize,
}

impl Budgets {
    fn from_env() -> Result<Budgets, CliError> {
        let mut out = Budgets {
            std: Budget::default(),
            max_unknowns: JetOptions::default().max_unknowns,
        };
        if let Ok(text) = std::env::var("MFW_BUDGET") {
            let n: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::Usage(format!(
                    "MFW_BUDGET must be a positive integer, got `{text}`"
                ))
            })?;
            out.std.max_pairs = n;
            out.max_unknowns = n;
        }
        Ok(out)
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn std_err(e: StdBasisError) -> CliError {
    match e {
        StdBasisError::NoGenerators | StdBasisError::ZeroGenerator(_) | StdBasisError::Poly(_) => {
            usage(e)
        }
        _ => CliError::Math(e.to_string()),
    }
}

fn milnor_err(e: MilnorError) -> CliError {
    match e {
        MilnorError::RingMismatch | MilnorError::Poly(_) => usage(e),
        MilnorError::StdBasis(s) => std_err(s),
        _ => CliError::Math(e.to_string()),
    }
}

fn algebra_err(e: AlgebraError) -> CliError {
    match e {
        AlgebraError::NotFiniteWithinBound { .. } | AlgebraError::Budget(_) => {
            CliError::Math(e.to_string())
        }
        _ => usage(e),
    }
}

fn mf_err(e: MfError) -> CliError {
    match e {
        MfError::NonIntegerEuler(_) | MfError::NotStabilized { .. } | MfError::Budget(_) => {
            CliError::Math(e.to_string())
        }
        MfError::Milnor(m) => milnor_err(m),
        MfError::Algebra(a) => algebra_err(a),
        _ => usage(e),
    }
}

fn series_err(e: SeriesError) -> CliError {
    match e {
        SeriesError::Parse(_) | SeriesError::NonIntegerCoefficient { .. } => usage(e),
        _ => CliError::Math(e.to_string()),
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
}

fn write(path: &str, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {path}: {e}")))
}

fn qs(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn strings(v: &[String]) -> Value {
    json!(v)
}

/// Inline form `a, b; c, d`, accepted back by `--alpha0`/`--alpha1`.
fn matrix_inline(m: &PolyMatrix) -> Value {
    Value::String(
        m.row_strings()
            .into_iter()
            .map(|r| r.join(", "))
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn ring_for(args: &PotentialArgs) -> Result<Arc<RingSpec>, CliError> {
    let order = match args.order {
        OrderArg::Global => MonomialOrder::GlobalDegRevLex,
        OrderArg::Local => MonomialOrder::LocalNegDegRevLex,
    };
    RingSpec::new(&args.vars, order).map_err(usage)
}

fn potential(args: &PotentialArgs) -> Result<Poly, CliError> {
    let ring = ring_for(args)?;
    parse_poly(&args.potential, &ring).map_err(|e| usage(format!("potential: {e}")))
}

fn milnor_of(w: &Poly, budgets: &Budgets) -> Result<MilnorAlgebra, CliError> {
    milnor_algebra_with_budget(w, &budgets.std).map_err(milnor_err)
}

fn add_conventions(r: &mut Report) {
    r.convention("differential", "[[0, delta1], [delta0, 0]] on F0 + F1")
        .convention("supertrace", "tr over F0 minus tr over F1")
        .convention(
            "derivative_product",
            "d_n delta * ... * d_1 delta, d_n leftmost",
        )
        .convention("composition", "a*b is a after b")
        .convention(
            "sign_calibration",
            "no extra global sign; ch(Laufer k) = -2(6k+3) y w^k under these conventions",
        );
}

fn milnor(args: &PotentialArgs, budgets: &Budgets) -> Result<Report, CliError> {
    let w = potential(args)?;
    let ma = milnor_of(&w, budgets)?;
    let mut r = Report::new("milnor");
    r.set("potential", w.to_string())
        .set("vars", strings(w.ring().variables()))
        .set("order", w.ring().order().name())
        .set("mu", ma.mu())
        .set("basis", strings(&ma.basis_strings()))
        .set("origin_only", ma.origin_only())
        .set("local_dimension", ma.local_dimension())
        .set("global_dimension", json!(ma.global_dimension()));
    r.set(
        "hessian_class",
        ma.from_coordinates(ma.hessian_class()).to_string(),
    );
    let socle = socle_milnor(&ma).map_err(milnor_err)?;
    r.set("socle", ma.from_coordinates(&socle).to_string());
    let qh = is_quasihomogeneous(&w).map_err(milnor_err)?;
    r.set("in_jacobian", qh.in_jacobian).set(
        "weights",
        qh.weights.as_deref().map(qs).unwrap_or(Value::Null),
    );
    r.set(
        "mult_by_w_is_zero",
        mult_by_w_matrix(&ma).map_err(milnor_err)?.is_zero(),
    );
    Ok(r)
}

fn residue(
    args: &PotentialArgs,
    f: &str,
    g: Option<&str>,
    budgets: &Budgets,
) -> Result<Report, CliError> {
    let w = potential(args)?;
    let ma = milnor_of(&w, budgets)?;
    let parse = |s: &str| parse_poly(s, w.ring()).map_err(|e| usage(format!("`{s}`: {e}")));
    let fp = parse(f)?;
    let mut r = Report::new("residue");
    r.set("potential", w.to_string()).set("f", fp.to_string());
    match g {
        None => {
            let v = grothendieck_residue(&fp, &ma).map_err(milnor_err)?;
            r.set("residue", v.to_string());
        }
        Some(g) => {
            let gp = parse(g)?;
            let v = residue_pairing(&fp, &gp, &ma).map_err(milnor_err)?;
            r.set("g", gp.to_string()).set("pairing", v.to_string());
        }
    }
    Ok(r)
}

struct Loaded {
    e: MatrixFactorization,
    generators: Vec<(&'static str, MfMorphism)>,
    label: String,
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::Ca1 => Family::CA1,
        FamilyArg::Laufer => Family::Laufer,
    }
}

fn load_builtin(f: FamilyArg, k: u32) -> Result<Loaded, CliError> {
    let e = builtin_family(family(f), k).map_err(mf_err)?;
    let generators = match f {
        FamilyArg::Laufer => {
            let (a, b) = laufer_generators(k).map_err(mf_err)?;
            vec![("a", a), ("b", b)]
        }
        FamilyArg::Ca1 => Vec::new(),
    };
    Ok(Loaded {
        e,
        generators,
        label: format!("{}({k})", family(f)),
    })
}

fn load(src: &MfSource) -> Result<Loaded, CliError> {
    match (&src.mf, src.family) {
        (Some(path), _) => Ok(Loaded {
            e: MatrixFactorization::from_toml(&read(path)?).map_err(mf_err)?,
            generators: Vec::new(),
            label: path.clone(),
        }),
        (None, Some(f)) => load_builtin(f, src.k),
        (None, None) => Err(usage("one of --mf or --family is required")),
    }
}

fn morphism(l: &Loaded, args: &MorphismArgs) -> Result<(MfMorphism, String), CliError> {
    if let (Some(a0), Some(a1)) = (&args.alpha0, &args.alpha1) {
        let ring = l.e.ring();
        let parse =
            |s: &str| PolyMatrix::parse_inline(ring, s).map_err(|e| usage(format!("`{s}`: {e}")));
        let m = MfMorphism::even(parse(a0)?, parse(a1)?).map_err(mf_err)?;
        let check = morphism_check(&l.e, &l.e, &m).map_err(mf_err)?;
        if !check.is_exact() {
            return Err(usage("the blocks do not commute with the differential"));
        }
        return Ok((m, format!("({a0}) + ({a1})")));
    }
    let text = args.morphism.clone().unwrap_or_else(|| "1".to_string());
    let m = evaluate_endomorphism(&l.e, &text, &l.generators).map_err(mf_err)?;
    Ok((m, text))
}

fn mf(cmd: MfCommand, budgets: &Budgets) -> Result<Report, CliError> {
    match cmd {
        MfCommand::Validate(src) => {
            let l = load(&src)?;
            let report = l.e.validate();
            let mut r = Report::new("mf validate");
            r.set("factorization", l.label.clone())
                .set("potential", l.e.potential().to_string())
                .set("rank", l.e.rank())
                .set("valid", report.is_ok());
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "identity": match v.identity {
                            Composition::Delta0Delta1 => "delta0*delta1",
                            Composition::Delta1Delta0 => "delta1*delta0",
                        },
                        "row": v.row,
                        "col": v.col,
                        "residual": v.residual.to_string(),
                    })
                })
                .collect();
            r.set("violations", violations);
            if !report.is_ok() {
                r.fail("the compositions differ from W times the identity");
            }
            Ok(r)
        }
        MfCommand::Chern(src) => {
            let l = load(&src)?;
            let ma = milnor_of(l.e.potential(), budgets)?;
            let ch = chern_character(&l.e, &ma).map_err(mf_err)?;
            let mut r = Report::new("mf chern");
            r.set("factorization", l.label.clone())
                .set("chern_character", ma.from_coordinates(&ch).to_string())
                .set("coordinates", qs(&ch))
                .set("milnor_basis", strings(&ma.basis_strings()));
            add_conventions(&mut r);
            Ok(r)
        }
        MfCommand::Chi { source, with } => {
            let l = load(&source)?;
            let ma = milnor_of(l.e.potential(), budgets)?;
            let other = match &with {
                Some(path) => MatrixFactorization::from_toml(&read(path)?).map_err(mf_err)?,
                None => l.e.clone(),
            };
            let chi = euler_pairing(&l.e, &other, &ma).map_err(mf_err)?;
            let mut r = Report::new("mf chi");
            r.set("factorization", l.label.clone())
                .set("with", with.unwrap_or_else(|| l.label.clone()))
                .set("chi", chi);
            add_conventions(&mut r);
            Ok(r)
        }
        MfCommand::Tau {
            source,
            morphism: margs,
        } => {
            let l = load(&source)?;
            let ma = milnor_of(l.e.potential(), budgets)?;
            let (m, text) = morphism(&l, &margs)?;
            let tau = boundary_bulk(&l.e, &m, &ma).map_err(mf_err)?;
            let tau_poly = ma.from_coordinates(&tau);
            let mut r = Report::new("mf tau");
            r.set("factorization", l.label.clone())
                .set("morphism", text)
                .set("tau", tau_poly.to_string())
                .set("coordinates", qs(&tau));
            match grothendieck_residue(&tau_poly, &ma) {
                Ok(v) => r.set("residue", v.to_string()),
                Err(e) => r.set("residue", format!("unavailable: {e}")),
            };
            add_conventions(&mut r);
            Ok(r)
        }
        MfCommand::Hom {
            source,
            morphism: margs,
            jet_order,
        } => {
            let l = load(&source)?;
            let (m, text) = morphism(&l, &margs)?;
            let verdict = homotopic(&l.e, &m, jet_order).map_err(mf_err)?;
            let mut r = Report::new("mf hom");
            r.set("factorization", l.label.clone())
                .set("morphism", text);
            match verdict {
                HomotopyVerdict::Yes { witness, jet_order } => {
                    r.set("verdict", "yes")
                        .set("witness", witness_value(&witness))
                        .set("witness_replayed", true);
                    r.convention("jet_order", jet_order);
                }
                HomotopyVerdict::NoUpTo(d) => {
                    r.set("verdict", format!("no_up_to_{d}"));
                    r.convention("jet_order", d);
                }
                HomotopyVerdict::Inconclusive { witness, jet_order } => {
                    r.set("verdict", "inconclusive")
                        .set("witness", witness_value(&witness))
                        .set("witness_replayed", true);
                    r.convention("jet_order", jet_order);
                }
            }
            add_conventions(&mut r);
            Ok(r)
        }
        MfCommand::Acon {
            source,
            jet_order,
            save,
        } => {
            let l = load(&source)?;
            let ma = milnor_of(l.e.potential(), budgets)?;
            let res = acon(&l.e, &ma, jet_order, budgets)?;
            let mut r = Report::new("mf acon");
            r.set("factorization", l.label.clone());
            acon_fields(&mut r, &res);
            r.set(
                "representatives",
                res.representatives
                    .iter()
                    .zip(res.algebra.labels())
                    .zip(&res.strata)
                    .map(|((m, label), s)| {
                        json!({
                            "label": label,
                            "stratum": s,
                            "alpha0": matrix_inline(m.first()),
                            "alpha1": matrix_inline(m.second()),
                        })
                    })
                    .collect::<Vec<_>>(),
            );
            if let Some(path) = save {
                write(&path, &res.algebra.to_toml())?;
                r.set("saved", path);
            }
            Ok(r)
        }
    }
}

fn witness_value(h: &MfMorphism) -> Value {
    json!({
        "beta": matrix_inline(h.first()),
        "beta_prime": matrix_inline(h.second()),
    })
}

fn acon(
    e: &MatrixFactorization,
    ma: &MilnorAlgebra,
    jet_order: u32,
    budgets: &Budgets,
) -> Result<ContractionAlgebraResult, CliError> {
    let opts = JetOptions {
        jet_order,
        max_unknowns: budgets.max_unknowns,
        ..JetOptions::default()
    };
    contraction_algebra_with_options(e, ma, &opts).map_err(mf_err)
}

fn blocks_value(b: &Blocks) -> Value {
    match b {
        Blocks::Split(sizes) => json!(sizes),
        Blocks::NotSplit => json!("not split over the rationals"),
    }
}

fn acon_fields(r: &mut Report, res: &ContractionAlgebraResult) {
    let a = &res.algebra;
    let rad = radical_and_blocks(a);
    r.set("dim", a.dim())
        .set("chi", res.chi)
        .set("labels", strings(a.labels()))
        .set("hh0", hh0(a).0)
        .set("radical_dim", rad.radical.len())
        .set("blocks", blocks_value(&rad.blocks))
        .set("socle_dim", socle_algebra(a).len())
        .set("commutative", a.is_commutative());
    add_conventions(r);
    r.convention("jet_order", res.jet_order_used)
        .convention("stabilized", res.stabilized)
        .convention(
            "window_dimensions",
            res.dims
                .iter()
                .map(|(d, n)| json!({"jet_order": d, "dim": n}))
                .collect::<Vec<_>>(),
        )
        .convention("variable_weights", json!(res.grading.variables));
    if !res.stabilized {
        r.fail(format!(
            "not stabilized: dimensions {:?}, Euler pairing {}",
            res.dims, res.chi
        ));
    }
}

fn presentation(p: &PresentationArgs) -> Result<FinDimAlgebra, CliError> {
    if p.gens.is_empty() {
        return Err(usage("one of --algebra or --gens is required"));
    }
    let gens: Vec<&str> = p.gens.iter().map(String::as_str).collect();
    let rels: Vec<&str> = p
        .relations
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    from_presentation(&gens, &rels, p.degree_bound).map_err(algebra_err)
}

fn load_algebra(src: &AlgebraSource) -> Result<FinDimAlgebra, CliError> {
    match &src.algebra {
        Some(path) => FinDimAlgebra::from_toml(&read(path)?).map_err(algebra_err),
        None => presentation(&src.presentation),
    }
}

fn parse_matrix(text: &str) -> Result<QMatrix, CliError> {
    let rows: Vec<Vec<Q>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|c| {
                    parse_rational(c)
                        .ok_or_else(|| usage(format!("`{}` is not a rational", c.trim())))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(usage("the pairing matrix must be square"));
    }
    Ok(QMatrix::from_rows(rows))
}

fn algebra(cmd: AlgebraCommand) -> Result<Report, CliError> {
    match cmd {
        AlgebraCommand::Present {
            presentation: p,
            save,
        } => {
            let a = presentation(&p)?;
            let mut r = Report::new("algebra present");
            r.set("dim", a.dim()).set("basis", strings(a.labels()));
            if let Some(path) = save {
                write(&path, &a.to_toml())?;
                r.set("saved", path);
            }
            Ok(r)
        }
        AlgebraCommand::Hh0(src) => {
            let a = load_algebra(&src)?;
            let (dim, reps) = hh0(&a);
            let mut r = Report::new("algebra hh0");
            r.set("dim", dim).set(
                "coset_basis",
                reps.iter()
                    .map(|&i| a.labels()[i].clone())
                    .collect::<Vec<_>>(),
            );
            Ok(r)
        }
        AlgebraCommand::Radical(src) => {
            let a = load_algebra(&src)?;
            let rad = radical_and_blocks(&a);
            let mut r = Report::new("algebra radical");
            r.set("dim", a.dim())
                .set("radical_dim", rad.radical.len())
                .set(
                    "radical_basis",
                    rad.radical.iter().map(|v| a.render(v)).collect::<Vec<_>>(),
                )
                .set("blocks", blocks_value(&rad.blocks));
            Ok(r)
        }
        AlgebraCommand::Socle(src) => {
            let a = load_algebra(&src)?;
            let soc = socle_algebra(&a);
            let mut r = Report::new("algebra socle");
            r.set("socle_dim", soc.len()).set(
                "socle_basis",
                soc.iter().map(|v| a.render(v)).collect::<Vec<_>>(),
            );
            Ok(r)
        }
        AlgebraCommand::Hhdims { source, max_degree } => {
            let a = load_algebra(&source)?;
            let dims = hochschild_cohomology_dims(&a, max_degree).map_err(algebra_err)?;
            let mut r = Report::new("algebra hhdims");
            r.set("dims", json!(dims));
            Ok(r)
        }
        AlgebraCommand::Frobenius { source, pairing } => {
            let a = load_algebra(&source)?;
            let g = parse_matrix(&pairing)?;
            if g.rows() != a.dim() {
                return Err(usage(format!(
                    "pairing is {0}x{0} but the algebra has dimension {1}",
                    g.rows(),
                    a.dim()
                )));
            }
            let mut r = Report::new("algebra frobenius");
            frobenius_fields(&mut r, &a, &g);
            Ok(r)
        }
    }
}

fn frobenius_fields(r: &mut Report, a: &FinDimAlgebra, g: &QMatrix) {
    r.set("gram_rank", g.rank());
    match check_frobenius(a, g) {
        FrobeniusVerdict::Ok => {
            r.set("verdict", "ok");
        }
        FrobeniusVerdict::Degenerate => {
            r.set("verdict", "degenerate");
            r.fail("the pairing is degenerate");
        }
        FrobeniusVerdict::NonInvariant { i, j, k } => {
            r.set("verdict", "non-invariant").set(
                "witness",
                json!([a.labels()[i], a.labels()[j], a.labels()[k]]),
            );
            r.fail("the pairing is not invariant");
        }
    }
}

fn series(cmd: SeriesCommand) -> Result<Report, CliError> {
    match cmd {
        SeriesCommand::Expand { n, order } => {
            let s = gv_expand(&n, order);
            let mut r = Report::new("series expand");
            r.set("n", json!(n))
                .set("order", order)
                .set(
                    "coefficients",
                    s.coefficients().iter().map(int).collect::<Vec<_>>(),
                )
                .set("degree", json!(s.degree()));
            Ok(r)
        }
        SeriesCommand::Invert { series, order } => {
            let s = IntSeries::parse(&series, order).map_err(series_err)?;
            let inv = gv_invert(&s).map_err(series_err)?;
            let mut r = Report::new("series invert");
            r.set("series", s.to_string())
                .set("n", json!(inv.n))
                .set("warnings", json!(inv.warnings));
            Ok(r)
        }
        SeriesCommand::Dim { n } => {
            let check = dim_check(&n);
            let mut r = Report::new("series dim");
            r.set("n", json!(n))
                .set("dim", check.dim)
                .set("hh0", hh0_from_gv(&n))
                .set("degree", json!(check.degree))
                .set("top_coefficient", int(&check.top_coefficient))
                .set("consistent", check.is_consistent());
            if !check.is_consistent() {
                r.fail("the expanded product does not have degree sum j^2 n_j with unit top coefficient");
            }
            Ok(r)
        }
    }
}

fn example(args: &ExampleArgs, budgets: &Budgets) -> Result<Report, CliError> {
    let l = load_builtin(args.family, args.k)?;
    let e = &l.e;
    let k = args.k;
    let ma = milnor_of(e.potential(), budgets)?;
    let mut r = Report::new(&format!("example {}", family(args.family)));
    r.set("k", k)
        .set("potential", e.potential().to_string())
        .set("valid", e.validate().is_ok())
        .set("mu", ma.mu())
        .set("milnor_basis", strings(&ma.basis_strings()));
    let ch = chern_character(e, &ma).map_err(mf_err)?;
    let chi = euler_pairing(e, e, &ma).map_err(mf_err)?;
    r.set("chern_character", ma.from_coordinates(&ch).to_string())
        .set("chi", chi);
    add_conventions(&mut r);

    // gv data known in closed form for these families
    let gv: Option<Vec<i64>> = match args.family {
        FamilyArg::Ca1 => Some(vec![i64::from(k)]),
        FamilyArg::Laufer if k == 1 => Some(vec![5, 1]),
        FamilyArg::Laufer => None,
    };

    if args.family == FamilyArg::Laufer {
        let words = [
            "1",
            "a",
            "b",
            "a^2",
            "b^2",
            "a*b",
            "a^2*b",
            "a*b^2",
            "a^2*b^2",
            "a*b - b*a",
        ];
        let mut table = Vec::new();
        for w in words {
            let m = evaluate_endomorphism(e, w, &l.generators).map_err(mf_err)?;
            let tau = boundary_bulk(e, &m, &ma).map_err(mf_err)?;
            table.push(json!({"word": w, "tau": ma.from_coordinates(&tau).to_string()}));
        }
        r.set("tau_table", table);
        let soc = evaluate_endomorphism(e, "a^2*b^2", &l.generators).map_err(mf_err)?;
        let sigma = frobenius_pairing(e, &soc, &MfMorphism::identity(e), &ma).map_err(mf_err)?;
        r.set("sigma_socle_unit", sigma.to_string());
        let rel = format!("a^2 - b^{}", 2 * k + 1);
        let pres = from_presentation(&["a", "b"], &["a*b + b*a", &rel], 4 * (6 * k as usize + 3))
            .map_err(algebra_err)?;
        let (pres_hh0, reps) = hh0(&pres);
        r.set(
            "presentation",
            json!({
                "relations": ["a*b + b*a", rel],
                "dim": pres.dim(),
                "hh0": pres_hh0,
                "hh0_basis": reps.iter().map(|&i| pres.labels()[i].clone()).collect::<Vec<_>>(),
            }),
        );
    }
    if let Some(n) = &gv {
        let check = dim_check(n);
        r.set(
            "gv",
            json!({
                "n": n,
                "dim": check.dim,
                "hh0": hh0_from_gv(n),
                "consistent": check.is_consistent(),
            }),
        );
    }
    if !args.all {
        return Ok(r);
    }

    let res = acon(e, &ma, args.jet_order, budgets)?;
    let mut sub = Report::new("acon");
    acon_fields(&mut sub, &res);
    let a = &res.algebra;
    let gram = QMatrix::from_rows(
        res.representatives
            .iter()
            .map(|x| {
                res.representatives
                    .iter()
                    .map(|y| frobenius_pairing(e, x, y, &ma).map_err(mf_err))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?,
    );
    frobenius_fields(&mut sub, a, &gram);
    let mut failures = Vec::new();
    if let Some(msg) = sub.failure_message() {
        failures.push(msg);
    }
    let acon_value = sub.result_value();
    r.set("contraction_algebra", acon_value);
    r.convention("jet_order", res.jet_order_used)
        .convention("stabilized", res.stabilized);
    if args.family == FamilyArg::Laufer {
        let rel = format!("a^2 - b^{}", 2 * k + 1);
        let m = evaluate_endomorphism(e, &rel, &l.generators).map_err(mf_err)?;
        let verdict = match homotopic(e, &m, args.jet_order).map_err(mf_err)? {
            HomotopyVerdict::Yes { .. } => "yes".to_string(),
            HomotopyVerdict::NoUpTo(d) => format!("no_up_to_{d}"),
            HomotopyVerdict::Inconclusive { .. } => "inconclusive".to_string(),
        };
        r.set(
            "relation_null_homotopic",
            json!({"morphism": rel, "verdict": verdict}),
        );
    }
    if let Some(n) = &gv {
        let dim_ok = i64::try_from(a.dim()).ok() == Some(dim_check(n).dim);
        let hh0_ok = i64::try_from(hh0(a).0).ok() == Some(hh0_from_gv(n));
        r.set("gv_matches_dim", dim_ok)
            .set("gv_matches_hh0", hh0_ok);
        if !dim_ok || !hh0_ok {
            failures.push("the series data disagree with the contraction algebra".to_string());
        }
    }
    if !failures.is_empty() {
        r.fail(failures.join("; "));
    }
    Ok(r)
}
