//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
//! any criterion fails.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gecert::diagonalize::{diagonalize_regular, elementary_group, ge_diagonalize, orthogonalize_row, SearchBudget};
use gecert::exchange::exchange_idempotent;
use gecert::format::{verify_certificate, write_certificate, Certificate};
use gecert::matrix::{signed_swap_transcript, ElementaryOp, Mat, Side};
use gecert::oracle::{
    check_separative, check_stable_rank_one, check_unit_regular_cross, enumerate_projective_classes,
    independence_invariant, IsoBudget,
};
use gecert::ring::presets::roster;
use gecert::Ring;

use common::{all_matrices, coefficient_bytes, invertible_commutative, invertible_ex212, right_ideal};

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

/// Serialize, parse back and replay; `Err` names the problem.
fn round_trip(ring: &Ring, cert: &Certificate) -> Result<(), String> {
    let text = write_certificate(ring, cert);
    match verify_certificate(&text, ring) {
        Ok(Ok(parsed)) if &parsed.certificate == cert => Ok(()),
        Ok(Ok(_)) => Err("parsed certificate differs".into()),
        Ok(Err(f)) => Err(format!("rejected: {f}")),
        Err(e) => Err(format!("unreadable: {e}")),
    }
}

/// Every single-byte change to a coefficient digit must be rejected.
/// `alphabet` lists the replacement bytes tried.
fn mutations_detected(ring: &Ring, cert: &Certificate, alphabet: &[u8]) -> Result<usize, String> {
    let text = write_certificate(ring, cert);
    let mut tried = 0;
    for pos in coefficient_bytes(&text) {
        for &b in alphabet {
            let mut bytes = text.as_bytes().to_vec();
            if bytes[pos] == b {
                continue;
            }
            bytes[pos] = b;
            tried += 1;
            let Ok(mutated) = String::from_utf8(bytes) else { continue };
            if let Ok(Ok(_)) = verify_certificate(&mutated, ring) {
                return Err(format!("mutation at byte {pos} to {b:#04x} accepted"));
            }
        }
    }
    Ok(tried)
}

fn decompose_all(ring: &Ring, mats: impl Iterator<Item = Mat>) -> Result<usize, String> {
    let mut count = 0;
    for a in mats {
        let d = ge_diagonalize(ring, &a).map_err(|e| format!("{}: {e}", a.render(ring)))?;
        ensure(d.replay_check(ring).ok(), || format!("replay fails on {}", a.render(ring)))?;
        count += 1;
    }
    Ok(count)
}

fn criterion_1_exchange_certificates() -> Result<String, String> {
    let mut elements = 0;
    let names = roster();
    for name in &names {
        let r = Ring::preset(name).map_err(|e| e.to_string())?;
        for a in r.elements() {
            let cert = exchange_idempotent(&r, a).map_err(|e| format!("{name}: {e}"))?;
            ensure(cert.a == a && cert.replays(&r), || format!("{name}: certificate for {} fails", r.render(a)))?;
            elements += 1;
        }
    }
    Ok(format!("{elements} elements over {} rings", names.len()))
}

fn criterion_2_ge_exhaustive() -> Result<String, String> {
    let z6 = Ring::preset("Z/6").unwrap();
    let gl_z6: Vec<Mat> = all_matrices(&z6, 2).filter(|m| invertible_commutative(&z6, m)).collect();
    ensure(gl_z6.len() == 6 * 48, || format!("|GL2(Z/6)| = {}", gl_z6.len()))?;
    ensure(gl_z6.iter().all(|m| m.invert(&z6).is_some()), || "invert disagrees on Z/6".into())?;
    let n_z6 = decompose_all(&z6, gl_z6.into_iter())?;

    let f4 = Ring::preset("F4").unwrap();
    let gl_f4: Vec<Mat> = all_matrices(&f4, 2).filter(|m| invertible_commutative(&f4, m)).collect();
    ensure(gl_f4.len() == 15 * 12, || format!("|GL2(F4)| = {}", gl_f4.len()))?;
    let n_f4 = decompose_all(&f4, gl_f4.into_iter())?;

    let ex = Ring::preset("Ex2.12(F2)").unwrap();
    let mut n_ex = 0;
    for m in all_matrices(&ex, 2).filter(|m| invertible_ex212(&ex, m)) {
        n_ex += decompose_all(&ex, std::iter::once(m))?;
    }
    // |GL2(F2)| scalar parts times 16^4 nilpotent parts.
    ensure(n_ex == 6 * 16usize.pow(4), || format!("|GL2(Ex2.12(F2))| = {n_ex}"))?;
    Ok(format!("GL2(Z/6) {n_z6}, GL2(F4) {n_f4}, GL2(Ex2.12(F2)) {n_ex}"))
}

fn criterion_3_ge_sampled() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z6 = Ring::preset("Z/6").unwrap();
    let m2 = Ring::preset("M2(F2)").unwrap();
    let a = decompose_all(&z6, (0..200).map(|_| Mat::random_invertible(&z6, 3, &mut rng)))?;
    let b = decompose_all(&m2, (0..200).map(|_| Mat::random_invertible(&m2, 2, &mut rng)))?;
    Ok(format!("GL3(Z/6) {a}, GL2(M2(F2)) {b}"))
}

fn criterion_4_signed_swap() -> Result<String, String> {
    for n in [2, 3, 5, 6] {
        let r = Ring::preset(&format!("Z/{n}")).unwrap();
        let swap = signed_swap_transcript(&r, 2, 2, 0, 1, Side::Row).map_err(|e| e.to_string())?;
        let out = swap.apply(&r, &Mat::identity(&r, 2)).map_err(|e| e.to_string())?;
        ensure(swap.len() == 3, || format!("Z/{n}: {} ops", swap.len()))?;
        ensure(out == Mat::from_ints(&r, 2, 2, &[0, 1, -1, 0]), || format!("Z/{n}: {}", out.render(&r)))?;
    }
    Ok("Z/2, Z/3, Z/5, Z/6".into())
}

fn criterion_5_orthogonal_rows() -> Result<String, String> {
    let r = Ring::preset("Z/6").unwrap();
    let everything = right_ideal(&r, &[r.one()]);
    let mut rows = 0;
    for n in [2usize, 3] {
        for code in 0..6usize.pow(n as u32) {
            let values: Vec<i64> = (0..n).map(|k| (code / 6usize.pow(k as u32) % 6) as i64).collect();
            let a: Vec<_> = values.iter().map(|&v| r.int(v)).collect();
            if right_ideal(&r, &a) != everything {
                continue;
            }
            rows += 1;
            let row = Mat::from_ints(&r, 1, n, &values);
            let o = orthogonalize_row(&r, &row).map_err(|e| format!("{values:?}: {e}"))?;
            ensure(o.replays(&r), || format!("{values:?}: certificate does not replay"))?;
            let (b, e) = (&o.entries, &o.idempotents);
            ensure(r.sum(e.iter().copied()) == r.one(), || format!("{values:?}: idempotents do not sum to 1"))?;
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    ensure(r.is_zero(r.mul(e[i], e[j])), || format!("{values:?}: e{i} e{j} != 0"))?;
                }
                let inside = r.elements().any(|x| r.mul3(a[i], x, a[i]) == b[i]);
                ensure(inside, || format!("{values:?}: b{i} not in a{i} R a{i}"))?;
            }
            let ideals: Vec<_> = b.iter().map(|&x| right_ideal(&r, &[x])).collect();
            let product: usize = ideals.iter().map(|s| s.len()).product();
            ensure(right_ideal(&r, b) == everything && product == r.size(), || {
                format!("{values:?}: b R is not a direct sum decomposition of R")
            })?;
        }
    }
    // 24 rows of length 2 and 182 of length 3 by inclusion-exclusion.
    ensure(rows == 24 + 182, || format!("{rows} unimodular rows"))?;
    Ok(format!("{rows} rows"))
}

fn criterion_6_example_212() -> Result<String, String> {
    let ex = Ring::preset("Ex2.12(F2)").unwrap();
    let a = Mat::new(&ex, 2, 2, (1..=4).map(|i| ex.basis(i)).collect()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for s in 0..10_000 {
        let len = rng.gen_range(1..=20);
        let mut m = a.clone();
        for _ in 0..len {
            let (i, j) = if rng.gen() { (0, 1) } else { (1, 0) };
            let c = ex.element_at(rng.gen_range(0..ex.size()));
            let op = if rng.gen() { ElementaryOp::row(i, j, c) } else { ElementaryOp::col(i, j, c) };
            op.apply(&ex, &mut m).map_err(|e| e.to_string())?;
            ensure(m.entries().iter().all(|&x| !ex.is_zero(x)), || format!("sequence {s}: zero entry"))?;
            let independent = independence_invariant(&ex, &m).map_err(|e| e.to_string())?;
            ensure(independent, || format!("sequence {s}: entries became dependent"))?;
        }
    }
    let mut pairs = 0;
    while pairs < 100_000 {
        let x = Mat::random(&ex, 2, 2, &mut rng);
        let y = Mat::random(&ex, 2, 2, &mut rng);
        if !invertible_ex212(&ex, &x) || !invertible_ex212(&ex, &y) {
            continue;
        }
        pairs += 1;
        let xay = x.mul(&ex, &a).and_then(|xa| xa.mul(&ex, &y)).map_err(|e| e.to_string())?;
        ensure(!xay.is_diagonal(), || format!("diagonal X A Y for X = {}", x.render(&ex)))?;
    }
    Ok(format!("10000 sequences, {pairs} invertible pairs"))
}

fn criterion_7_separativity_oracles() -> Result<String, String> {
    let budget = IsoBudget::default();
    let mut cross_checked = 0;
    let names = roster();
    for name in &names {
        let r = Ring::preset(name).unwrap();
        let sr1 = check_stable_rank_one(&r).map_err(|e| e.to_string())?;
        let table = enumerate_projective_classes(&r, 2, &budget).map_err(|e| format!("{name}: {e}"))?;
        let sep = check_separative(&r, &table, &budget);
        ensure(sr1.holds, || format!("{name}: stable rank one fails: {sr1}"))?;
        ensure(sep.holds && sep.exhaustive, || format!("{name}: separativity: {sep}"))?;
        ensure(!sr1.holds || sep.holds, || format!("{name}: stable rank one without separativity"))?;
        if r.size() <= 64 {
            let v = check_unit_regular_cross(&r, &budget).map_err(|e| e.to_string())?;
            ensure(v.holds && v.exhaustive, || format!("{name}: {v}"))?;
            cross_checked += v.checked;
        }
    }
    Ok(format!("{} rings, {cross_checked} regular elements cross-checked", names.len()))
}

fn criterion_8_regular_matrices() -> Result<String, String> {
    let f2 = Ring::preset("F2").unwrap();
    let a = Mat::from_ints(&f2, 2, 2, &[1, 1, 0, 0]);
    let d = diagonalize_regular(&f2, &a, &SearchBudget::default())
        .map_err(|e| e.to_string())?
        .ok_or("search exhausted on [[1,1],[0,0]]")?;
    ensure(d.replays(&f2) && d.diagonal == Mat::from_ints(&f2, 2, 2, &[1, 0, 0, 0]), || "F2 example".into())?;
    // E2(F2) = SL2(F2) = GL2(F2), of order 6.
    let group = elementary_group(&f2, 2, 1 << 10).ok_or("E2(F2) too large")?;
    ensure(group.len() == 6, || format!("|E2(F2)| = {}", group.len()))?;
    let row_only = group.iter().filter(|e| e.mul(&f2, &a).unwrap().is_diagonal()).count();
    ensure(row_only == 0, || "a row-only diagonalization exists".into())?;

    let z6 = Ring::preset("Z/6").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..50 {
        let m = Mat::random(&z6, 2, 2, &mut rng);
        let budget = SearchBudget { seed: k, ..SearchBudget::default() };
        let d = diagonalize_regular(&z6, &m, &budget)
            .map_err(|e| format!("{}: {e}", m.render(&z6)))?
            .ok_or_else(|| format!("search exhausted on {}", m.render(&z6)))?;
        ensure(d.replays(&z6), || format!("{} does not replay", m.render(&z6)))?;
    }
    Ok("F2 example, |E2(F2)| = 6 with no row-only solution, 50 over Z/6".into())
}

fn criterion_9_certificate_round_trip() -> Result<String, String> {
    let mut certs = 0;
    let mut mutations = 0;
    let all_bytes: Vec<u8> = (0..=255).collect();
    let digits: Vec<u8> = b"0123456789".to_vec();

    // Criterion 2 inputs.
    let z6 = Ring::preset("Z/6").unwrap();
    let f4 = Ring::preset("F4").unwrap();
    let ex = Ring::preset("Ex2.12(F2)").unwrap();
    for (ring, ex_ring) in [(&z6, false), (&f4, false), (&ex, true)] {
        let members = all_matrices(ring, 2).filter(|m| {
            if ex_ring {
                invertible_ex212(ring, m)
            } else {
                invertible_commutative(ring, m)
            }
        });
        for (k, m) in members.enumerate() {
            let cert = Certificate::Ge(ge_diagonalize(ring, &m).map_err(|e| e.to_string())?);
            round_trip(ring, &cert).map_err(|e| format!("{}: {e}", m.render(ring)))?;
            certs += 1;
            if !ex_ring || k % 997 == 0 {
                let alphabet = if k < 20 && !ex_ring { &all_bytes } else { &digits };
                mutations += mutations_detected(ring, &cert, alphabet)?;
            }
        }
    }

    // Criterion 3 inputs, regenerated from the same seed.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m2 = Ring::preset("M2(F2)").unwrap();
    let mut sampled = Vec::new();
    for _ in 0..200 {
        sampled.push((z6.clone(), Mat::random_invertible(&z6, 3, &mut rng)));
    }
    for _ in 0..200 {
        sampled.push((m2.clone(), Mat::random_invertible(&m2, 2, &mut rng)));
    }
    for (ring, m) in &sampled {
        let cert = Certificate::Ge(ge_diagonalize(ring, m).map_err(|e| e.to_string())?);
        round_trip(ring, &cert)?;
        mutations += mutations_detected(ring, &cert, &digits)?;
        certs += 1;
    }

    // Criterion 8 inputs.
    let f2 = Ring::preset("F2").unwrap();
    let mut regular = vec![(f2.clone(), Mat::from_ints(&f2, 2, 2, &[1, 1, 0, 0]), 0)];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..50 {
        regular.push((z6.clone(), Mat::random(&z6, 2, 2, &mut rng), k));
    }
    for (ring, m, seed) in &regular {
        let budget = SearchBudget { seed: *seed, ..SearchBudget::default() };
        let d = diagonalize_regular(ring, m, &budget).map_err(|e| e.to_string())?.ok_or("search exhausted")?;
        let cert = Certificate::Regular(d);
        round_trip(ring, &cert)?;
        mutations += mutations_detected(ring, &cert, &all_bytes)?;
        certs += 1;
    }
    Ok(format!("{certs} certificates round-tripped, {mutations} coefficient mutations rejected"))
}

type Criterion = (u32, &'static str, fn() -> Result<String, String>);

const CRITERIA: [Criterion; 9] = [
    (1, "exchange certificates replay", criterion_1_exchange_certificates),
    (2, "GE diagonalization, exhaustive", criterion_2_ge_exhaustive),
    (3, "GE diagonalization, sampled", criterion_3_ge_sampled),
    (4, "signed-swap identity", criterion_4_signed_swap),
    (5, "orthogonalized rows, exhaustive", criterion_5_orthogonal_rows),
    (6, "example ring resists diagonalization", criterion_6_example_212),
    (7, "separativity and stable rank oracles", criterion_7_separativity_oracles),
    (8, "regular matrix diagonalization", criterion_8_regular_matrices),
    (9, "certificate round trip", criterion_9_certificate_round_trip),
];

fn main() {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (number, title, check) in CRITERIA {
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {number} PASS {title}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {number} FAIL {title}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
