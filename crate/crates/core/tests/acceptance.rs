//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ramfilt::classify::{admissible_sequences, ckp_filtration, is_admissible_seq, cyclic_check};
use ramfilt::construct::construct_extension;
use ramfilt::fields::*;
use ramfilt::ramification::{
    candidate_grid, disc_to_jump, filtration, filtration_via_unit_images, hyperplane_jump_multiset,
    jump_of_hyperplane, kummer_jump, line_jump_multiset, upper_group_log_orders,
};
use ramfilt::units::{decompose, is_pth_power, recompose};
use ramfilt::{ElementRepr, Error, FieldSpec, KModP, RingElement, Subspace};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn name(k: &FieldSpec) -> String {
    let s = k.source();
    format!("p={} g={:?} E={:?}", s.p, s.g, s.eisenstein)
}

/// The canonical full-precision lift of a residue class.
fn lift(a: &RingElement) -> RingElement {
    let repr = a
        .to_repr()
        .iter()
        .map(|w| w.iter().map(|&c| c as i64).collect())
        .collect();
    RingElement::from_repr(a.field(), &ElementRepr::Poly(repr)).unwrap()
}

fn is_unit(a: &RingElement) -> bool {
    !a.residue().is_zero()
}

fn all_subspaces(v: &KModP) -> Vec<Subspace> {
    (0..=v.dim())
        .flat_map(|d| Subspace::enumerate_all(v.p(), v.dim(), d))
        .collect()
}

fn log_p(mut x: usize, p: usize) -> Option<usize> {
    let mut k = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        k += 1;
    }
    Some(k)
}

fn six_fields() -> Vec<(Arc<FieldSpec>, usize)> {
    vec![
        (q2(), 3),
        (q3(), 2),
        (q5(), 2),
        (q3_zeta3(), 4),
        (q4(), 4),
        (q2_sqrt2(), 4),
    ]
}

fn criterion_1() -> Check {
    for (k, expected) in six_fields() {
        let v = KModP::new(&k);
        let closed = k.n() + if k.zeta_p() { 2 } else { 1 };
        ensure!(
            v.dim() == expected && closed == expected,
            "{}: dim V = {}, expected {expected}",
            name(&k),
            v.dim()
        );
    }
    for k in [q2(), q3(), q5()] {
        // U^N lies in the p-th powers once N exceeds the critical level
        let n = k.crit_floor() + 2;
        let units: Vec<RingElement> = k.quotient_elements(n).into_iter().filter(is_unit).collect();
        let powers: HashSet<RingElement> = units.iter().map(|u| u.pow(k.p() as u128)).collect();
        let index = units.len() / powers.len();
        let brute = 1 + log_p(index, k.p() as usize).ok_or("index is not a power of p")?;
        let v = KModP::new(&k);
        ensure!(
            brute == v.dim(),
            "{}: |U/U^p| gives dim {brute}, computed {}",
            name(&k),
            v.dim()
        );
        let mut coords = vec![v
            .coordinates(&RingElement::pi(&k))
            .map_err(|e| e.to_string())?];
        for u in &units {
            coords.push(v.coordinates(&lift(u)).map_err(|e| e.to_string())?);
        }
        let rank = Subspace::span(&coords, v.dim(), v.p())
            .map_err(|e| e.to_string())?
            .dim();
        ensure!(rank == v.dim(), "{}: coordinate rank {rank}", name(&k));
    }
    Ok(())
}

fn criterion_2() -> Check {
    for (k, _) in six_fields() {
        let v = KModP::new(&k);
        let closed = ckp_filtration(&k);
        let computed = filtration(&v, &v.zero()).map_err(|e| e.to_string())?;
        ensure!(
            closed == computed,
            "{}: closed {closed} vs computed {computed}",
            name(&k)
        );
    }
    let middle = ckp_filtration(&q4());
    ensure!(
        middle.pairs() == [(-1, 1), (1, 2), (2, 1)],
        "f = 2 case gave {middle}"
    );
    let ramified = ckp_filtration(&q2_sqrt2());
    ensure!(
        ramified.pairs() == [(-1, 1), (1, 1), (3, 1), (4, 1)],
        "e = 2 case gave {ramified}"
    );
    Ok(())
}

fn criterion_3() -> Check {
    let k = q2();
    let v = KModP::new(&k);
    let hyperplanes = v
        .zero()
        .enumerate_hyperplanes_above()
        .map_err(|e| e.to_string())?;
    ensure!(hyperplanes.len() == 7, "{} hyperplanes", hyperplanes.len());
    let multiset = hyperplane_jump_multiset(&v).map_err(|e| e.to_string())?;
    let expected: BTreeMap<i64, usize> = [(-1, 1), (1, 2), (2, 4)].into_iter().collect();
    ensure!(multiset == expected, "multiset {multiset:?}");
    // the seven square classes d: Q_2(√d) has discriminant exponent 0 for
    // d ≡ 1 mod 4, 2 for d ≡ 3 mod 4, 3 for d even
    let mut classical = BTreeMap::new();
    for d in [-1i64, 2, -2, 5, -5, 10, -10] {
        let disc = match d.rem_euclid(4) {
            1 => 0,
            3 => 2,
            _ => 3,
        };
        let t = disc_to_jump(2, disc).map_err(|e| e.to_string())?;
        let c = v
            .coordinates(&RingElement::from_int(&k, d))
            .map_err(|e| e.to_string())?;
        let via_coords = kummer_jump(&v, &c).map_err(|e| e.to_string())?;
        ensure!(
            via_coords == t,
            "Q_2(√{d}): jump {via_coords}, classical {t}"
        );
        *classical.entry(t).or_insert(0) += 1;
    }
    ensure!(classical == expected, "classical multiset {classical:?}");
    Ok(())
}

fn criterion_4() -> Check {
    let k = q2();
    let v = KModP::new(&k);
    for (a, t) in [(-1, 1), (5, -1), (2, 2), (3, 1)] {
        let c = v
            .coordinates(&RingElement::from_int(&k, a))
            .map_err(|e| e.to_string())?;
        let got = kummer_jump(&v, &c).map_err(|e| e.to_string())?;
        ensure!(got == t, "class of {a}: jump {got}, expected {t}");
    }
    let lines = line_jump_multiset(&v).map_err(|e| e.to_string())?;
    let planes = hyperplane_jump_multiset(&v).map_err(|e| e.to_string())?;
    ensure!(lines == planes, "lines {lines:?} vs hyperplanes {planes:?}");
    Ok(())
}

fn criterion_5() -> Check {
    for (k, max_n) in [(q2_m(8), 8), (q3(), 6), (q3_zeta3(), 7)] {
        let crit_floor = k.crit_floor();
        for n in (crit_floor + 1)..=max_n {
            let units: Vec<RingElement> =
                k.quotient_elements(n).into_iter().filter(is_unit).collect();
            let powers: HashSet<RingElement> = units.iter().map(|u| u.pow(k.p() as u128)).collect();
            for u in &units {
                let fast = is_pth_power(&lift(u), 0).map_err(|e| e.to_string())?;
                ensure!(fast == powers.contains(u), "{} N={n}: {:?}", name(&k), u);
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for k in all_fields() {
        let v = KModP::new(&k);
        for n in all_subspaces(&v).iter().filter(|n| n.codim() <= 4) {
            let s = filtration(&v, n).map_err(|e| e.to_string())?;
            let verdict = is_admissible_seq(&k, &s).map_err(|e| e.to_string())?;
            ensure!(
                verdict.admissible,
                "{}: {s} is not admissible ({:?})",
                name(&k),
                verdict.reason
            );
        }
        for s in admissible_sequences(&k) {
            let w = construct_extension(&v, &s).map_err(|e| format!("{}: {s}: {e}", name(&k)))?;
            let back = filtration(&v, &w.normic).map_err(|e| e.to_string())?;
            ensure!(back == s, "{}: {s} came back as {back}", name(&k));
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let zeta_fields: Vec<_> = all_fields().into_iter().filter(|k| k.zeta_p()).collect();
    ensure!(zeta_fields.len() >= 3, "too few fields with ζ_p");
    for k in zeta_fields {
        let v = KModP::new(&k);
        ensure!(v.dim() <= 5, "dim V too large for exhaustion");
        let lines = line_jump_multiset(&v).map_err(|e| e.to_string())?;
        let planes = hyperplane_jump_multiset(&v).map_err(|e| e.to_string())?;
        ensure!(
            lines == planes,
            "{}: lines {lines:?} vs hyperplanes {planes:?}",
            name(&k)
        );
    }
    Ok(())
}

fn random_principal_unit(k: &Arc<FieldSpec>, rng: &mut StdRng) -> RingElement {
    let repr = (0..k.e())
        .map(|_| (0..k.f()).map(|_| rng.gen_range(0..1 << 20)).collect())
        .collect();
    let r = RingElement::from_repr(k, &ElementRepr::Poly(repr)).unwrap();
    &RingElement::one(k) + &(&RingElement::pi(k) * &r)
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for k in all_fields() {
        for _ in 0..200 {
            let u = random_principal_unit(&k, &mut rng);
            let dec = decompose(&u, 1).map_err(|e| e.to_string())?;
            let rec = recompose(&k, &dec).map_err(|e| e.to_string())?;
            let residual = &u * &rec.unit_inverse().map_err(|e| e.to_string())?;
            ensure!(
                is_pth_power(&residual, 0).map_err(|e| e.to_string())?,
                "{}: residual of {:?} is not a p-th power",
                name(&k),
                u
            );
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    for k in [q2(), q3(), q5()] {
        let v = KModP::new(&k);
        let grid: BTreeSet<i64> = candidate_grid(&v).into_iter().collect();
        let top = k.crit_ceil() as i64 + 1;
        let nus: Vec<i64> = (-1..=top).collect();
        for n in all_subspaces(&v).iter().filter(|n| n.codim() > 0) {
            let orders = upper_group_log_orders(&v, n, &nus).map_err(|e| e.to_string())?;
            // the same orders straight from the unit filtration
            for (i, &nu) in nus.iter().enumerate() {
                let direct = if nu < 0 {
                    n.codim()
                } else {
                    n.sum(&v.unit_level_image(nu as u32))
                        .map_err(|e| e.to_string())?
                        .dim()
                        - n.dim()
                };
                ensure!(direct == orders[i], "{}: |G^{nu}| mismatch", name(&k));
            }
            for i in 0..nus.len() - 1 {
                ensure!(
                    orders[i] == orders[i + 1] || grid.contains(&nus[i]),
                    "{}: filtration drops after {} off the grid",
                    name(&k),
                    nus[i]
                );
            }
            let s = filtration(&v, n).map_err(|e| e.to_string())?;
            ensure!(
                s == filtration_via_unit_images(&v, n).map_err(|e| e.to_string())?,
                "routes differ"
            );
            for h in n.enumerate_hyperplanes_above().map_err(|e| e.to_string())? {
                ensure!(
                    grid.contains(&jump_of_hyperplane(&v, &h).map_err(|e| e.to_string())?),
                    "jump off grid"
                );
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    let k = q3();
    for ok in [&[1][..], &[1, 2], &[1, 2, 3]] {
        let v = cyclic_check(&k, ok).map_err(|e| e.to_string())?;
        ensure!(v.admissible, "{ok:?} rejected ({:?})", v.reason);
    }
    for bad in [&[1, 3][..], &[2]] {
        let v = cyclic_check(&k, bad).map_err(|e| e.to_string())?;
        ensure!(!v.admissible, "{bad:?} accepted");
    }
    ensure!(
        cyclic_check(&q2(), &[1]) == Err(Error::ZetaInK),
        "Q_2 not rejected with ZetaInK"
    );
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "dim V = n+1 / n+2, brute-force index and coordinate rank",
            criterion_1,
        ),
        (
            "closed-form filtration of C_K(p) equals computed filtration",
            criterion_2,
        ),
        (
            "Q_2: 7 quadratic classes, jump multiset {-1:1, 1:2, 2:4}",
            criterion_3,
        ),
        ("Q_2 Kummer jumps of -1, 5, 2, 3", criterion_4),
        (
            "p-th power test agrees with exhaustive enumeration",
            criterion_5,
        ),
        (
            "filtrations admissible; admissible sequences round-trip",
            criterion_6,
        ),
        ("line and hyperplane jump multisets agree", criterion_7),
        (
            "random principal units recompose up to p-th powers",
            criterion_8,
        ),
        ("filtration changes only on the jump grid", criterion_9),
        ("cyclic jump checker", criterion_10),
    ];
    let mut failed = 0;
    for (i, (label, check)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        match check() {
            Ok(()) => println!("PASS {:>2}  {label}  ({:.2?})", i + 1, started.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}  {label}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
