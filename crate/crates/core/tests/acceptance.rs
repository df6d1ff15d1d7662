//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//! Run with `cargo test -p residue-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use residue_core::homology::CubicalStructure;
use residue_core::laurent::{DifferentialForm, LaurentPoly, MultiIndex};
use residue_core::parallel::par_map_indexed;
use residue_core::residue::{
    global_residue_sum, monomial_form, nodal_factorization_check, residue_form, residue_monomial_det,
};
use residue_core::scalar::{ExtensionField, Field, Rational, Scalar};
use residue_core::upoly::UPoly;
use residue_core::verify::*;

const SEED: u64 = 0x00AC_CE97;

type Outcome = Result<String, String>;
type DimCheck = fn(&mut ChaCha8Rng, usize) -> Check;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

/// Runs `check` on `cases` seeded cases in parallel and reports the first
/// failure by case index.
fn cases(
    label: &str,
    stream: u64,
    cases: usize,
    check: impl Fn(&mut ChaCha8Rng) -> Check + Sync + Send,
) -> Result<usize, String> {
    let results = par_map_indexed(cases, |i| check(&mut case_rng(SEED ^ stream.rotate_left(17), i as u64)));
    match results.into_iter().enumerate().find_map(|(i, r)| r.err().map(|e| (i, e))) {
        Some((i, e)) => Err(format!("{label} case {i}: {e}")),
        None => Ok(cases),
    }
}

fn per_dim(
    label: &str,
    stream: u64,
    n_cases: usize,
    check: fn(&mut ChaCha8Rng, usize) -> Check,
) -> Result<usize, String> {
    let mut total = 0;
    for n in 1..=2 {
        total += cases(&format!("{label} n={n}"), stream * 8 + n as u64, n_cases, |rng| check(rng, n))?;
    }
    Ok(total)
}

fn c1_dim_one_residues() -> Outcome {
    let t = |e: i64| LaurentPoly::monomial(1, Field::Rational, Scalar::one(), MultiIndex(vec![e]));
    let cs = CubicalStructure::new(1);
    for i in -5..=5 {
        let form = DifferentialForm::new(t(i), vec![t(1)]).map_err(|e| e.to_string())?;
        let v = residue_form(&form, &cs).map_err(|e| e.to_string())?;
        let expected = Rational::from_integer(i64::from(i == -1).into());
        if v != expected {
            return Err(format!("res t^{i} dt = {v}, expected {expected}"));
        }
    }
    Ok("11 exponents".into())
}

fn balanced_columns() -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            let c = -a - b;
            if (-2..=2).contains(&c) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn c2_determinant_law() -> Outcome {
    let cols = balanced_columns();
    let mut matrices = Vec::new();
    for x in &cols {
        for y in &cols {
            matrices.push((0..3).map(|r| vec![x[r], y[r]]).collect::<Vec<_>>());
        }
    }
    let exhaustive = matrices.len();
    let mut rng = case_rng(SEED, 2);
    for _ in 0..100 {
        matrices.push(random_exponent_matrix(&mut rng, 2, false));
    }
    let cs = CubicalStructure::new(2);
    let results = par_map_indexed(matrices.len(), |k| {
        let beta = Scalar::Rational(random_rational(&mut case_rng(SEED, 1000 + k as u64)));
        let c = &matrices[k];
        let form = monomial_form(c, &beta, &Field::Rational).map_err(|e| e.to_string())?;
        let a = residue_form(&form, &cs).map_err(|e| e.to_string())?;
        let b = residue_monomial_det(c, &beta, &Field::Rational).map_err(|e| e.to_string())?;
        if a == b {
            Ok(())
        } else {
            Err(format!("{c:?}: residue_form {a} vs det law {b}"))
        }
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("{exhaustive} balanced + 100 unbalanced matrices"))
}

fn c3_three_paths() -> Outcome {
    let z = per_dim("zigzag", 3, 100, zigzag_case)?;
    let c = per_dim("phi_c", 4, 100, phi_c_case)?;
    Ok(format!("{z} cycles for zigzag, {c} chains for phi_c"))
}

fn c4_commutator_formula() -> Outcome {
    let k = per_dim("commutator", 5, 100, commutator_formula_case)?;
    let l = cases("lam1", 6, 100, prop_lam1)?;
    Ok(format!("{k} Lie chains, {l} commuting pairs"))
}

fn c5_differentials() -> Outcome {
    let checks: [(&str, DimCheck); 6] = [
        ("b^2", b_squared_case),
        ("delta_CE^2", ce_squared_case),
        ("partial^2", partial_squared_case),
        ("H^2", h_squared_case),
        ("homotopy", homotopy_case),
        ("b eps = eps delta", epsilon_chain_map_case),
    ];
    let mut total = 0;
    for (k, (label, check)) in checks.into_iter().enumerate() {
        total += per_dim(label, 10 + k as u64, 50, check)?;
    }
    Ok(format!("6 identities, {total} chains"))
}

fn c6_trace_axioms() -> Outcome {
    let t1 = per_dim("T1", 20, 100, trace_t1_case)?;
    let t3 = per_dim("T3", 21, 100, trace_t3_case)?;
    let t5 = per_dim("T5", 22, 100, trace_t5_case)?;
    Ok(format!("T1 {t1}, T3 {t3}, T5 {t5} operators"))
}

fn c7_extension_field() -> Outcome {
    let ext = ExtensionField::new(UPoly::from_i64(&[1, 0, 1]), "x").map_err(|e| e.to_string())?;
    let field = Field::Extension(ext.clone());
    let t = |c: Scalar, e: i64| LaurentPoly::monomial(1, field.clone(), c, MultiIndex(vec![e]));
    let cs = CubicalStructure::new(1);
    let res = |c: Scalar| -> Result<Rational, String> {
        let form = DifferentialForm::new(t(c, -1), vec![t(Scalar::one(), 1)]).map_err(|e| e.to_string())?;
        residue_form(&form, &cs).map_err(|e| e.to_string())
    };
    let one = res(Scalar::one())?;
    let x = res(ext.generator())?;
    if one != Rational::from_integer(2.into()) || x != Rational::from_integer(0.into()) {
        return Err(format!("res t^-1 dt = {one}, res x t^-1 dt = {x}"));
    }
    Ok("res t^-1 dt = 2, res x t^-1 dt = 0".into())
}

fn c8_global_sum() -> Outcome {
    let functions: Vec<_> =
        (0..50).map(|i| random_rational_function(&mut case_rng(SEED, 800 + i), i % 3 == 0)).collect();
    let results = par_map_indexed(functions.len(), |i| global_residue_sum(&functions[i]).map_err(|e| e.to_string()));
    let mut quadratic = 0;
    for (r, out) in functions.iter().zip(results) {
        let (sum, places) = out?;
        if sum != Rational::from_integer(0.into()) {
            return Err(format!("{r}: sum {sum}"));
        }
        quadratic += usize::from(places.iter().any(|(p, _)| p.degree() == 2));
    }
    if quadratic < 10 {
        return Err(format!("only {quadratic} functions with a quadratic place"));
    }
    Ok(format!("50 functions, {quadratic} with a quadratic place"))
}

fn c9_nodal() -> Outcome {
    if nodal_factorization_check(12) {
        Ok("order 12".into())
    } else {
        Err("factorization check failed at order 12".into())
    }
}

fn c10_invariance() -> Outcome {
    let k = per_dim("idempotent offsets", 30, 50, idempotent_invariance_case)?;
    let c = cases("u = t + t^2", 31, 50, prop_coordinate_invariance)?;
    Ok(format!("{k} cycles x 7 offsets per axis, {c} substitutions"))
}

fn c11_cyclic_vanishing() -> Outcome {
    let mut rng = case_rng(SEED, 11);
    let n: Vec<usize> = (0..50).map(|_| rng.gen_range(1..=2)).collect();
    let results = par_map_indexed(50, |i| cyclic_vanishing_case(&mut case_rng(SEED ^ 0xC1C, i as u64), n[i]));
    results.into_iter().enumerate().try_for_each(|(i, r)| r.map_err(|e| format!("case {i}: {e}")))?;
    Ok(format!("50 cycles ({} with n=2)", n.iter().filter(|&&d| d == 2).count()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "residue of t^i dt via the operator trace",
            limit: Some(Duration::from_secs(1)),
            run: c1_dim_one_residues,
        },
        Criterion {
            name: "determinant law for n=2 monomials",
            limit: Some(Duration::from_secs(30)),
            run: c2_determinant_law,
        },
        Criterion {
            name: "closed = zigzag on cycles, closed = sign * phi_C on chains",
            limit: Some(Duration::from_secs(60)),
            run: c3_three_paths,
        },
        Criterion {
            name: "commutator formula = closed formula after epsilon",
            limit: None,
            run: c4_commutator_formula,
        },
        Criterion { name: "differentials, homotopy and chain map", limit: None, run: c5_differentials },
        Criterion { name: "trace axioms T1, T3, T5", limit: None, run: c6_trace_axioms },
        Criterion { name: "residues over Q[x]/(x^2+1)", limit: None, run: c7_extension_field },
        Criterion {
            name: "global residue sum on the projective line",
            limit: Some(Duration::from_secs(30)),
            run: c8_global_sum,
        },
        Criterion { name: "nodal cubic factorization", limit: Some(Duration::from_secs(1)), run: c9_nodal },
        Criterion { name: "idempotent and coordinate invariance", limit: None, run: c10_invariance },
        Criterion { name: "cyclic vanishing", limit: None, run: c11_cyclic_vanishing },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, c.limit) {
            (Err(e), _) => Err(e.clone()),
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (Ok(detail), _) => Ok(detail.clone()),
        };
        match verdict {
            Ok(detail) => println!("PASS [{:>2}] {} ({detail}; {elapsed:.2?})", i + 1, c.name),
            Err(e) => {
                failed += 1;
                println!("FAIL [{:>2}] {}: {e} ({elapsed:.2?})", i + 1, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
