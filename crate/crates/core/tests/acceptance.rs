//! Acceptance suite: one test per criterion, each printing a PASS line when
//! it completes (run with `--nocapture` to see them). All comparisons are
//! exact rational equality.

use num_traits::Zero;

use rspin::closedforms::{
    admissible_onepoints, appendix_c_f, boussinesq, eq11_check, euler_characteristic, k_insertions,
    lagrange_identity_check, onepoint_k, onepoint_partition, threespin_gamma,
};
use rspin::correlators::{Engine, Insertion};
use rspin::psido::GammaTable;
use rspin::scalar::{bernoulli, fmt_rat, parse_rat, rat, rat_int};
use rspin::smallphase::{conjecture_scan, fourpoint, fractional_power_fourpoint_check};
use rspin::wrpoly::{
    appendix_a_multinomial, appendix_a_numeric, appendix_a_symbolic, appendix_b_check, build_wr,
    coefficient_law_check,
};
use rspin::Rat;

fn q(s: &str) -> Rat {
    parse_rat(s).unwrap()
}

/// The twelve one-point reference values (g, n, m, value); the last six are
/// given with power-of-ten denominators, reproduced here as exact
/// fractions.
///
/// The g=10 numerator is 26605753, where the reference prints 2660573 with
/// one digit dropped: the two independent closed forms and the recursion
/// engine all give 26605753, and every neighboring entry reproduces exactly
/// (entries beyond g=5 are optional; see the decisions ledger).
fn onepoint_reference() -> Vec<(u32, u32, u32, Rat)> {
    vec![
        (1, 1, 0, q("1/6")),
        (2, 3, 2, q("11/3600")),
        (4, 8, 1, q("341/25920000")),
        (5, 10, 3, q("161/777600000")),
        (6, 13, 0, q("3397/93312000000")),
        (7, 15, 2, q("3421/4199040000000")),
        (9, 20, 1, q("1670581/846526464000000000")),
        (10, 22, 3, q("26605753/1088391168000000000000")),
        (11, 25, 0, q("21324511/5986151424000000000000")),
        (12, 27, 2, q("87572287/1306069401600000000000000")),
        (14, 32, 1, q("7787064791/65825897840640000000000000000")),
        (15, 34, 3, q("538156369/423166486118400000000000000000")),
    ]
}

fn twopoint_reference() -> Vec<(u32, [(u32, u32); 2], Rat)> {
    vec![
        (1, [(0, 2), (1, 3)], q("1/60")),
        (1, [(0, 3), (1, 2)], q("1/60")),
        (2, [(0, 1), (4, 1)], q("7/1200")),
        (2, [(0, 2), (4, 0)], q("7/1200")),
        (2, [(1, 1), (3, 1)], q("17/1200")),
        (2, [(1, 2), (3, 0)], q("47/3600")),
        (2, [(2, 0), (2, 2)], q("59/3600")),
        (2, [(2, 1), (2, 1)], q("9/400")),
        (3, [(3, 2), (3, 2)], q("697/324000")),
        (3, [(3, 1), (3, 3)], q("1111/756000")),
        (3, [(2, 1), (4, 3)], q("803/756000")),
        (3, [(2, 2), (4, 2)], q("557/324000")),
    ]
}

fn threepoint_reference() -> Vec<(u32, [(u32, u32); 3], Rat)> {
    vec![
        (1, [(0, 1), (0, 1), (2, 3)], q("1/30")),
        (1, [(0, 1), (0, 2), (2, 2)], q("1/20")),
        (1, [(0, 1), (0, 3), (2, 1)], q("1/20")),
        (1, [(0, 2), (0, 2), (2, 1)], q("1/15")),
        (1, [(0, 2), (0, 3), (2, 0)], q("1/30")),
        (2, [(0, 1), (0, 1), (5, 0)], q("31/3600")),
        (2, [(0, 1), (0, 3), (4, 3)], q("7/6000")),
        (2, [(0, 2), (0, 2), (4, 3)], q("1/500")),
        (2, [(0, 2), (0, 3), (4, 2)], q("23/9000")),
        (2, [(0, 3), (0, 3), (4, 1)], q("1/500")),
        (2, [(0, 1), (1, 1), (4, 0)], q("17/600")),
        (2, [(1, 1), (1, 1), (3, 0)], q("41/600")),
    ]
}

/// Criterion 1: the r=5 reference table. Every one-point entry (all genera
/// up to 15) is checked against both closed forms; the engine reproduces the
/// required g <= 4 subset plus the g = 5, 6 entries, and all two- and
/// three-point entries.
#[test]
fn criterion_01_reference_table_r5() {
    let mut engine = Engine::new(5).unwrap();
    for (g, n, m, want) in onepoint_reference() {
        assert_eq!(
            onepoint_partition(5, n, m, g).unwrap(),
            want,
            "partition form at g={g}"
        );
        assert_eq!(
            onepoint_k(5, n, m, g).unwrap(),
            want,
            "K-operator form at g={g}"
        );
        if g <= 6 {
            assert_eq!(engine.correlator(g, &[(n, m)]), want, "engine at g={g}");
        }
    }
    for (g, ins, want) in twopoint_reference() {
        assert_eq!(engine.correlator(g, &ins), want, "two-point g={g} {ins:?}");
    }
    for (g, ins, want) in threepoint_reference() {
        assert_eq!(
            engine.correlator(g, &ins),
            want,
            "three-point g={g} {ins:?}"
        );
    }
    println!("criterion 01: PASS - all 36 r=5 reference values reproduced");
}

/// Criterion 2: W_r for r = 2..6 equals the reference displays
/// coefficient-for-coefficient.
#[test]
fn criterion_02_wr_tables() {
    let cases: Vec<(u32, Vec<(&[(u32, u32)], Rat)>)> = vec![
        (2, vec![(&[(0, 2)][..], q("1/12"))]),
        (3, vec![(&[(1, 2)][..], q("1/6"))]),
        (
            4,
            vec![
                (&[(2, 2)][..], q("1/4")),
                (&[(0, 0), (0, 2)][..], q("1/48")),
                (&[(0, 1), (0, 1)][..], q("1/32")),
                (&[(0, 4)][..], q("1/480")),
            ],
        ),
        (
            5,
            vec![
                (&[(0, 1), (1, 1)][..], q("1/10")),
                (&[(0, 0), (1, 2)][..], q("1/30")),
                (&[(0, 2), (1, 0)][..], q("1/30")),
                (&[(3, 2)][..], q("1/3")),
                (&[(1, 4)][..], q("1/150")),
            ],
        ),
        (
            6,
            vec![
                (&[(0, 3), (0, 1)][..], q("5/864")),
                (&[(0, 0), (0, 1), (0, 1)][..], q("1/144")),
                (&[(2, 1), (0, 1)][..], q("1/8")),
                (&[(0, 0), (2, 2)][..], q("1/24")),
                (&[(0, 0), (0, 0), (0, 2)][..], q("1/432")),
                (&[(2, 0), (0, 2)][..], q("1/24")),
                (&[(2, 4)][..], q("1/72")),
                (&[(0, 6)][..], q("1/9072")),
                (&[(0, 2), (0, 2)][..], q("11/2592")),
                (&[(1, 1), (1, 1)][..], q("1/12")),
                (&[(1, 0), (1, 2)][..], q("1/18")),
                (&[(0, 0), (0, 4)][..], q("1/720")),
                (&[(4, 2)][..], q("5/12")),
            ],
        ),
    ];
    for (r, terms) in cases {
        let wr = build_wr(r).unwrap();
        assert_eq!(wr.num_terms(), terms.len(), "W_{r} term count");
        for (pairs, want) in terms {
            assert_eq!(wr.coeff(pairs), want, "W_{r} coefficient at {pairs:?}");
        }
    }
    println!("criterion 02: PASS - W_2..W_6 match the reference displays");
}

/// Criterion 3: the Bernoulli coefficient laws of the single-variable
/// derivative coefficients for all r <= 7, plus the recursion agreement and
/// vanishing odd cases.
#[test]
fn criterion_03_coefficient_laws() {
    for r in 2..=7u32 {
        let wr = build_wr(r).unwrap();
        assert_eq!(
            coefficient_law_check(&wr, 1),
            rat(r as i64 - 1, 12),
            "(r-1)/12 law at r={r}"
        );
        for k in 1..=(r / 2) {
            coefficient_law_check(&wr, k); // asserts the closed form, odd vanishing
        }
        for i in 2..=r {
            appendix_b_check(&wr, i); // recursion, Bernoulli form, W_r relation
        }
    }
    println!("criterion 03: PASS - coefficient laws hold for r <= 7");
}

/// Criterion 4: engine = K-operator form = partition form on every
/// admissible one-point input with r in {3,4,5}, g <= 3.
#[test]
fn criterion_04_onepoint_three_paths() {
    for r in [3u32, 4, 5] {
        let mut engine = Engine::new(r).unwrap();
        let mut checked = 0;
        for (n, m, g) in admissible_onepoints(r, 3) {
            let via_k = onepoint_k(r, n, m, g).unwrap();
            let via_p = onepoint_partition(r, n, m, g).unwrap();
            let via_e = engine.correlator(g, &[(n, m)]);
            assert_eq!(
                via_k, via_p,
                "K vs partition at r={r} (n,m,g)=({n},{m},{g})"
            );
            assert_eq!(
                via_e, via_k,
                "engine vs closed form at r={r} (n,m,g)=({n},{m},{g})"
            );
            checked += 1;
        }
        assert!(checked > 0);
    }
    println!("criterion 04: PASS - one-point three-path agreement (r=3,4,5; g<=3)");
}

/// Criterion 5: the r=3 gamma-quotient formula equals the engine for g <= 2,
/// k <= 6, including the three base values 1/3, 2/3, 0.
#[test]
fn criterion_05_threespin_gamma() {
    assert_eq!(threespin_gamma(0, 3, 1).unwrap(), q("1/3"));
    assert_eq!(threespin_gamma(0, 4, 0).unwrap(), q("2/3"));
    assert_eq!(threespin_gamma(0, 5, 2).unwrap(), Rat::from(rat_int(0)));
    let mut engine = Engine::new(3).unwrap();
    let mut checked = 0;
    for g in 0..=2u32 {
        for k in 0..=6u32 {
            for j in 0..=1u32 {
                let num = 8 * g as i64 + 2 * k as i64 - 5 - j as i64;
                if num < 0 || num % 3 != 0 {
                    continue;
                }
                let n = (num / 3) as u32;
                let mut ins = vec![(0u32, 1u32); k as usize];
                ins.push((n, j));
                assert_eq!(
                    engine.correlator(g, &ins),
                    threespin_gamma(g, k, j).unwrap(),
                    "g={g} k={k} j={j}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 8);
    // the k-insertion partition form covers the same family
    assert_eq!(k_insertions(3, 4, 1, 0, 0).unwrap(), q("2/3"));
    println!("criterion 05: PASS - r=3 gamma formula matches the engine (g<=2, k<=6)");
}

/// Criterion 6: Euler characteristics -B_{2g}/(2g) for g <= 10.
#[test]
fn criterion_06_euler_characteristics() {
    assert_eq!(euler_characteristic(1), q("-1/12"));
    assert_eq!(euler_characteristic(2), q("1/120"));
    assert_eq!(euler_characteristic(3), q("-1/252"));
    for g in 1..=10u32 {
        let v = euler_characteristic(g); // asserts the Bernoulli identity
        assert_eq!(v, -bernoulli(2 * g) / rat_int(2 * g as i64));
    }
    println!("criterion 06: PASS - Euler characteristics for g <= 10");
}

/// Criterion 7: f_n(0) = -B_n/n for n <= 20 and the harmonic-Bernoulli
/// identity for u <= 10.
#[test]
fn criterion_07_bernoulli_identities() {
    for n in 2..=20u32 {
        let v = appendix_c_f(n); // asserts internally
        assert_eq!(v, -bernoulli(n) / rat_int(n as i64));
    }
    for u in 2..=10u32 {
        assert!(eq11_check(u), "u={u}");
    }
    println!("criterion 07: PASS - Bernoulli recursion identities (n<=20, u<=10)");
}

/// Criterion 8: the quadratic combinatorial identity symbolically for n <= 8
/// and at random rational specializations for n <= 14, the multinomial
/// reformulation, and the Lagrange-inversion self-test.
#[test]
fn criterion_08_combinatorial_identity() {
    for n in 1..=8u32 {
        assert!(appendix_a_symbolic(n), "symbolic n={n}");
    }
    for n in 1..=14u32 {
        assert!(
            appendix_a_numeric(n, 0x5EED_0000 + n as u64),
            "numeric n={n}"
        );
    }
    assert!(appendix_a_multinomial(7));
    assert!(lagrange_identity_check(10, 3, 0x1DEA));
    println!("criterion 08: PASS - combinatorial identity and Lagrange self-test");
}

/// Criterion 9: the Boussinesq sequences. The a-values, b_1, b_4, the
/// recursion/Lagrange agreement for m <= 8, and the engine cross-checks all
/// hold. The reference b_2 and b_3 fractions do NOT hold: they are digit
/// transpositions, over-determined by four independent witnesses inside the
/// same source (see the assertion messages). This criterion is therefore
/// expected to fail exactly on those two comparisons; the analysis lives in
/// the decisions ledger.
#[test]
fn criterion_09_boussinesq() {
    let (a, b) = boussinesq(8);
    assert_eq!(a[0], q("1/3"));
    assert_eq!(a[1], q("80/9"));
    assert_eq!(a[2], q("179200/9"));
    assert_eq!(a[3], q("1281280000/3"));
    assert_eq!(b[0], q("1/36"));
    assert_eq!(b[3], q("85/52488"));
    // boussinesq() itself asserts the Lagrange path equals the recursion for
    // every m <= 8, so reaching this point discharges that clause.

    // engine cross-checks: a_1 = <tau_{0,1}^4>_0 and a_2 = <tau_{0,1}^7 tau_{2,0}^2>_0
    let mut engine = Engine::new(3).unwrap();
    assert_eq!(engine.correlator(0, &[(0, 1); 4]), a[0]);
    let mut ins = vec![(0u32, 1u32); 7];
    ins.extend_from_slice(&[(2, 0), (2, 0)]);
    assert_eq!(engine.correlator(0, &ins), a[1]);

    // The two reference comparisons below are the fractions as given. They
    // contradict the values forced by (i) b_m = (5m-3) a_m/((3m+1)!(2m-2)!)
    // with the a_m above, (ii) the recursion (2m-2) b_m = sum (5i-1)(3m-3i+1)
    // b_i b_{m-i} from b_1 = 1/36, (iii) the reference b_4 = 85/52488, which
    // the recursion reproduces only from b_2 = 1/162 and b_3 = 2/729, and
    // (iv) Lagrange inversion of the reference series x = 36y - 288y^2 - ...
    // (already verified above). 1/126 and 2/792 transpose the digits of
    // 1/162 and 2/729.
    assert_eq!(
        b[1],
        q("1/126"),
        "reference value for b_2 is inconsistent with the defining relation; the computed value {} is forced (see decisions ledger)",
        fmt_rat(&b[1])
    );
    assert_eq!(
        b[2],
        q("1/396"),
        "reference value for b_3 (2/792) is inconsistent with the defining relation; the computed value {} is forced (see decisions ledger)",
        fmt_rat(&b[2])
    );
    println!("criterion 09: PASS - Boussinesq sequences");
}

/// Criterion 10: residue-formula correlators equal the WDVV engine on every
/// admissible primary multiset for r <= 6, and the three four-point formulas
/// agree for all r <= 12.
#[test]
fn criterion_10_genus_zero_cross_oracle() {
    for r in 2..=6u32 {
        let mut engine = Engine::new(r).unwrap();
        // conjecture_scan asserts residue == engine on every multiset
        let report = conjecture_scan(&mut engine).unwrap();
        assert!(report.checked > 0 || r == 2);
    }
    let mut quadruples = 0u64;
    for r in 2..=12u32 {
        for m in 0..=(r - 2) {
            for u in 0..=(r - 2) {
                for v in 0..=(r - 2) {
                    for w in 0..=(r - 2) {
                        let _ = fourpoint(r, m, u, v, w); // asserts all three forms agree
                        quadruples += 1;
                    }
                }
            }
        }
    }
    assert!(quadruples > 10_000);
    // the degree-3 fractional-power expansion reproduces the four-point law
    for r in [3u32, 4, 5, 6] {
        for m in 0..=(r - 2) {
            assert!(
                fractional_power_fourpoint_check(r, m).unwrap(),
                "r={r} m={m}"
            );
        }
    }
    println!("criterion 10: PASS - genus-zero cross-oracles (r<=6 full; four-point r<=12)");
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 16
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random insertion multiset for the identity tests: r in 2..=6, g <= 3, at
/// most `smax` points. With `punctured` the multiset is admissible once a
/// τ_{0,0} is prepended (the string-equation shape); without it the multiset
/// is admissible on its own (the dilaton shape, since the dilaton insertion
/// is dimension-neutral).
fn random_admissible_key(
    rng: &mut Lcg,
    smax: u32,
    punctured: bool,
) -> Option<(u32, u32, Vec<(u32, u32)>)> {
    let r = 2 + rng.below(5) as u32;
    let g = rng.below(4) as u32;
    let s = 1 + rng.below(smax as u64) as u32;
    if g == 0 && s + u32::from(punctured) < 3 {
        return None;
    }
    let slots = s + u32::from(punctured);
    let total = (r as i64 + 1) * (2 * g as i64 - 2) + (r * slots) as i64;
    if total < 0 {
        return None;
    }
    let mut ins: Vec<(u32, u32)> = Vec::new();
    let mut remaining = total;
    for _ in 0..(s - 1) {
        let cap = (remaining / s as i64).max(0).min(2 * r as i64);
        let code = rng.below(cap as u64 + 1) as i64;
        let n = (code / r as i64) as u32;
        let m = (code % r as i64) as u32;
        if m > r - 2 {
            return None;
        }
        ins.push((n, m));
        remaining -= code;
    }
    if remaining < 0 {
        return None;
    }
    let n = (remaining / r as i64) as u32;
    let m = (remaining % r as i64) as u32;
    if m > r - 2 || n > 14 {
        return None;
    }
    ins.push((n, m));
    Some((r, g, ins))
}

/// Criterion 11: structural suites. String and dilaton identities on 50
/// randomized admissible keys (r <= 6, g <= 3); weight homogeneity of every
/// gamma-table entry (asserted during the builds); the root round-trip for
/// r <= 7; and the dimension gate on 1000 violating keys.
#[test]
fn criterion_11_structural_suites() {
    // string equation on 50 randomized keys admissible in the punctured form
    let mut rng = Lcg(0x57121146);
    let mut engines: std::collections::HashMap<u32, Engine> = std::collections::HashMap::new();
    let mut string_checked = 0;
    let mut string_nonzero = 0;
    while string_checked < 50 {
        let Some((r, g, ins)) = random_admissible_key(&mut rng, 4, true) else {
            continue;
        };
        if g == 0 && ins.len() == 2 {
            // the punctured three-point is the exceptional constant term of
            // the string constraint, not an instance of the removal identity
            continue;
        }
        let engine = engines.entry(r).or_insert_with(|| Engine::new(r).unwrap());
        let mut with_punct = ins.clone();
        with_punct.push((0, 0));
        debug_assert!(engine.dimension_ok(
            g,
            &with_punct
                .iter()
                .map(|&(n, m)| Insertion::new(n, m))
                .collect::<Vec<_>>()
        ));
        let lhs = engine.correlator(g, &with_punct);
        let mut rhs = Rat::from(rat_int(0));
        for j in 0..ins.len() {
            if ins[j].0 == 0 {
                continue;
            }
            let mut low = ins.clone();
            low[j] = (low[j].0 - 1, low[j].1);
            rhs += engine.correlator(g, &low);
        }
        assert_eq!(lhs, rhs, "string equation at r={r} g={g} {ins:?}");
        string_checked += 1;
        string_nonzero += u32::from(!lhs.is_zero());
    }
    assert!(
        string_nonzero > 0,
        "every randomized string key evaluated to zero"
    );
    // dilaton equation on 50 randomized keys (the dilaton insertion is
    // dimension-neutral, so the base key itself must be admissible)
    let mut dilaton_checked = 0;
    let mut dilaton_nonzero = 0;
    while dilaton_checked < 50 {
        let Some((r, g, ins)) = random_admissible_key(&mut rng, 3, false) else {
            continue;
        };
        let engine = engines.entry(r).or_insert_with(|| Engine::new(r).unwrap());
        let base = engine.correlator(g, &ins);
        let mut with_dilaton = ins.clone();
        with_dilaton.push((1, 0));
        let lhs = engine.correlator(g, &with_dilaton);
        assert_eq!(
            lhs,
            rat_int(2 * g as i64 - 2 + ins.len() as i64) * &base,
            "dilaton at r={r} g={g} {ins:?}"
        );
        dilaton_checked += 1;
        dilaton_nonzero += u32::from(!base.is_zero());
    }
    assert!(
        dilaton_nonzero > 0,
        "every randomized dilaton key evaluated to zero"
    );
    // gamma homogeneity and root round-trip, r <= 7
    for r in 2..=7u32 {
        let depth = r + 3;
        let table = GammaTable::build(r, depth).unwrap(); // asserts homogeneity
        let count = depth - r + 1;
        let rules = table.negative_part_eliminations(count).unwrap();
        let lr = table.eliminated_root(count).unwrap().pow(r);
        let floor = lr.floor().unwrap();
        assert_eq!(floor, r as i64 - 1 - depth as i64);
        for ell in floor..0 {
            assert!(
                lr.coeff(ell).unwrap().is_zero(),
                "r={r}: negative order {ell} survives"
            );
        }
        assert!(lr.coeff(r as i64 - 1).unwrap().is_zero());
        // nonnegative orders reproduce the substituted table coefficients
        for i in 0..=(r as i64 - 2) {
            let mut gamma = table.gamma(i, r).unwrap();
            for (idx, rep) in &rules {
                gamma = gamma.substitute(rspin::diffalg::Family::W, *idx, rep);
            }
            assert_eq!(lr.coeff(i).unwrap(), gamma, "r={r} order {i}");
        }
    }
    // dimension gate: 1000 violating keys return zero without expansion
    let mut engine = Engine::new(5).unwrap();
    let mut rng = Lcg(0xD1351011);
    let mut violating = 0;
    while violating < 1000 {
        let g = rng.below(6) as u32;
        let s = 1 + rng.below(5) as usize;
        let ins: Vec<(u32, u32)> = (0..s)
            .map(|_| (rng.below(9) as u32, rng.below(4) as u32))
            .collect();
        let key: Vec<Insertion> = ins.iter().map(|&(n, m)| Insertion::new(n, m)).collect();
        if engine.dimension_ok(g, &key) {
            continue;
        }
        let before = engine.stats().expansions;
        assert!(engine.correlator(g, &ins).is_zero());
        assert_eq!(engine.stats().expansions, before, "gate must not recurse");
        violating += 1;
    }
    println!(
        "criterion 11: PASS - structural suites (string/dilaton, homogeneity, round-trip, gate)"
    );
}

/// Criterion 12: the integrality / vanishing / monotonicity scan reports
/// zero violations for every r <= 6.
#[test]
fn criterion_12_conjecture_scan() {
    for r in 2..=6u32 {
        let mut engine = Engine::new(r).unwrap();
        let report = conjecture_scan(&mut engine).unwrap();
        assert!(
            report.clean(),
            "conjectured properties violated at r={r}: {report:?}"
        );
    }
    println!("criterion 12: PASS - conjecture scan clean for r <= 6");
}

/// Engine reproduction of the genus-10 one-point value, the third
/// independent witness for the corrected reference numerator asserted in
/// criterion 1. Takes on the order of twenty minutes in release mode; run
/// with `cargo test --release -p rspin --test acceptance -- --ignored`.
#[test]
#[ignore = "slow: ~20 minutes of recursion"]
fn genus10_engine_witness() {
    let mut engine = Engine::new(5).unwrap();
    assert_eq!(
        engine.correlator(10, &[(22, 3)]),
        q("26605753/1088391168000000000000")
    );
}
