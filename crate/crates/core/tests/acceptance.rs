//! Acceptance gate: one pass/fail line per criterion.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use arclat::birational::{birational_congruence, realize_birational, BirationalSequence};
use arclat::catalog::{self, Decoration, Mark};
use arclat::ideal::{
    enumerate_essential_ideals, enumerate_essential_simple, enumerate_simple, ArcIdeal,
};
use arclat::insertion::{classes, classes_by_contraction, eq_poset, is_hasse_regular};
use arclat::quiver::quiver_generators;
use arclat::schroder::{admissible_schroder_trees, count_by_blocks, face_vector};
use arclat::septree::{
    admissible_trees, congruence_interval, enumerate_separating_trees, is_admissible,
    SeparatingTree,
};
use arclat::shuffle::{deconcatenation_probe, shifted_shuffle};
use arclat::{all_permutations, Arc, Permutation};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::time::Instant;

fn report(num: usize, desc: &str, ok: bool) {
    println!("criterion {num} ({desc}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {num} ({desc}) failed");
}

#[test]
fn criterion_01_separating_tree_counts() {
    let expected = [1usize, 2, 8, 42, 264, 1898, 15266, 135668];
    let t7 = Instant::now();
    let mut ok = (1..=7).all(|n| enumerate_separating_trees(n).unwrap().len() == expected[n - 1]);
    ok &= t7.elapsed().as_secs() < 10;
    let t8 = Instant::now();
    ok &= enumerate_separating_trees(8).unwrap().len() == expected[7];
    ok &= t8.elapsed().as_secs() < 120;
    report(1, "separating tree counts 1..=8 within time bounds", ok);
}

#[test]
fn criterion_02_schroder_table() {
    let by_k: [&[usize]; 7] = [
        &[1],
        &[1, 2],
        &[1, 6, 8],
        &[1, 14, 46, 42],
        &[1, 30, 184, 388, 264],
        &[1, 62, 638, 2344, 3556, 1898],
        &[1, 126, 2064, 11818, 30134, 35134, 15266],
    ];
    let totals = [1usize, 3, 15, 103, 867, 8499, 94543];
    let t6 = Instant::now();
    let mut ok = (1..=6).all(|n| {
        let table = count_by_blocks(n).unwrap();
        table.values().sum::<usize>() == totals[n - 1]
            && (1..=n).all(|k| table.get(&k).copied().unwrap_or(0) == by_k[n - 1][k - 1])
    });
    ok &= t6.elapsed().as_secs() < 60;
    let table = count_by_blocks(7).unwrap();
    ok &= table.values().sum::<usize>() == totals[6]
        && (1..=7).all(|k| table.get(&k).copied().unwrap_or(0) == by_k[6][k - 1]);
    report(2, "Schröder separating tree table 1..=7", ok);
}

#[test]
fn criterion_03_simple_congruence_counts() {
    let essential = [1usize, 1, 4, 25, 196, 1764];
    let all = [1usize, 2, 7, 38, 274, 2350];
    let ok = (1..=6).all(|n| {
        enumerate_essential_simple(n).unwrap().len() == essential[n - 1]
            && enumerate_simple(n, false).unwrap().len() == all[n - 1]
    });
    report(3, "simple congruence counts 1..=6", ok);
}

#[test]
fn criterion_04_simplicity_equivalence() {
    let perms = all_permutations(4);
    let ok = enumerate_essential_ideals(4).unwrap().par_iter().all(|a| {
        let simple = a.is_simple();
        let all_trees = perms.iter().all(|s| eq_poset(s, a).unwrap().is_tree());
        let regular = is_hasse_regular(4, a).unwrap();
        simple == all_trees && simple == regular
    });
    report(4, "simple ⟺ tree posets ⟺ regular Hasse at n = 4", ok);
}

#[test]
fn criterion_05_vertex_correspondence() {
    let mut ok = true;
    for n in 1..=5usize {
        for a in enumerate_essential_simple(n).unwrap() {
            let cls = classes(n, &a).unwrap();
            let from_classes: BTreeSet<SeparatingTree> = cls
                .iter()
                .map(|c| {
                    SeparatingTree::new(n, c.poset.edges().iter().cloned().collect()).unwrap()
                })
                .collect();
            let admissible: BTreeSet<SeparatingTree> =
                admissible_trees(n, &a).unwrap().into_iter().collect();
            ok &= from_classes == admissible;
            // multiplicity: each class is exactly the linear extensions of its tree
            ok &= cls.iter().all(|c| {
                c.members.len() == c.poset.linear_extensions().len()
            });
            ok &= cls.iter().map(|c| c.members.len()).sum::<usize>()
                == (1..=n).product::<usize>();
        }
    }
    report(5, "classes ↔ admissible separating trees for n ≤ 5", ok);
}

fn catalog_ideals(n: usize) -> Vec<ArcIdeal> {
    let mut out = vec![
        catalog::trivial(n),
        catalog::sylvester(n),
        catalog::antisylvester(n),
        catalog::recoil(n),
        catalog::baxter(n),
        catalog::genrect(n),
    ];
    if n >= 2 {
        out.push(catalog::cambrian(n, Arc::up(1, n as u8)).unwrap());
        out.push(catalog::precoil(n, 2).unwrap());
        out.push(catalog::ptwist(n, 1));
        out.push(catalog::sashes(n, 1, 2.min(n)).unwrap());
        let marks = (0..n)
            .map(|i| [Mark::None, Mark::UpBarrier, Mark::DownBarrier, Mark::Both][i % 4])
            .collect();
        out.push(catalog::permutree(n, &Decoration::new(marks)).unwrap());
    }
    out
}

fn classes_agree(n: usize, a: &ArcIdeal) -> bool {
    let direct: BTreeSet<Vec<Permutation>> = classes(n, a)
        .unwrap()
        .into_iter()
        .map(|c| c.members)
        .collect();
    let contracted: BTreeSet<Vec<Permutation>> = classes_by_contraction(n, a)
        .unwrap()
        .into_iter()
        .map(|mut m| {
            m.sort();
            m
        })
        .collect();
    direct == contracted
}

#[test]
fn criterion_06_oracle_agreement() {
    let mut ok = (1..=4usize).all(|n| {
        enumerate_essential_ideals(n)
            .unwrap()
            .par_iter()
            .all(|a| classes_agree(n, a))
    });
    for n in 1..=6usize {
        ok &= catalog_ideals(n).par_iter().all(|a| classes_agree(n, a));
    }
    report(6, "insertion classes = contraction classes", ok);
}

/// Reconstructs the permutree decoration of an ideal whose forbidden
/// generators are all single-interior up/down arcs, if it is one.
fn as_permutree(n: usize, a: &ArcIdeal) -> Option<ArcIdeal> {
    let mut marks = vec![Mark::None; n];
    for arc in a.minimal_non_arcs() {
        if arc.interior_len() != 1 || !(arc.is_up() || arc.is_down()) {
            return None;
        }
        let v = arc.left() as usize; // barrier at the interior point left+1
        marks[v] = match (marks[v], arc.is_up()) {
            (Mark::None, true) | (Mark::UpBarrier, true) => Mark::UpBarrier,
            (Mark::None, false) | (Mark::DownBarrier, false) => Mark::DownBarrier,
            _ => Mark::Both,
        };
    }
    catalog::permutree(n, &Decoration::new(marks)).ok()
}

#[test]
fn criterion_07_interval_theorem() {
    let mut ok = true;
    for n in 1..=5usize {
        let trees = enumerate_separating_trees(n).unwrap();
        let ideals = enumerate_essential_simple(n).unwrap();
        ok &= trees.par_iter().all(|t| {
            let (min, max) = congruence_interval(t);
            let fits = ideals.iter().all(|a| {
                is_admissible(t, a).unwrap()
                    == (min.is_subideal_of(a) && a.is_subideal_of(&max))
            });
            fits && as_permutree(n, &min) == Some(min.clone())
        });
    }
    report(7, "admissible ⟺ interval membership; minimum is a permutree", ok);
}

#[test]
fn criterion_08_face_formula() {
    let mut ok = true;
    for n in 1..=5usize {
        for a in enumerate_essential_simple(n).unwrap() {
            let faces = admissible_schroder_trees(n, &a).unwrap();
            let from_trees: usize = admissible_trees(n, &a)
                .unwrap()
                .iter()
                .map(|t| 1usize << t.descent_count())
                .sum();
            ok &= faces.len() == from_trees;
            let euler: i64 = face_vector(n, &a)
                .unwrap()
                .iter()
                .map(|(&k, &v)| (v as i64) * if (n - k) % 2 == 0 { 1 } else { -1 })
                .sum();
            ok &= euler == 1;
        }
    }
    report(8, "face count Σ 2^des and Euler relation for n ≤ 5", ok);
}

/// Product closure for a pair of congruences: the class of the concatenated
/// congruence must refine "same factor classes of the value-split subwords".
fn closure_holds(m: usize, a: &ArcIdeal, n: usize, b: &ArcIdeal) -> bool {
    let ra = realize_birational(a).unwrap();
    let rb = realize_birational(b).unwrap();
    let rs = arclat::shuffle::concat_sequences(&ra, &rb);
    let c = birational_congruence(&rs).unwrap();
    let split = |p: &Permutation| {
        let low: Vec<u8> = p.word().iter().copied().filter(|&v| v <= m as u8).collect();
        let high: Vec<u8> = p.word().iter().copied().filter(|&v| v > m as u8).collect();
        (
            eq_poset(&Permutation::standardize(&low), a).unwrap().to_string(),
            eq_poset(&Permutation::standardize(&high), b).unwrap().to_string(),
        )
    };
    classes(m + n, &c).unwrap().iter().all(|class| {
        let first = split(&class.bottom);
        class.members.iter().all(|p| split(p) == first)
    })
}

#[test]
fn criterion_09_shuffle_product_and_hopf_probe() {
    let listed: BTreeSet<Permutation> = [
        "12453", "14253", "14523", "14532", "41253", "41523", "41532", "45123", "45132", "45312",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let mut ok = shifted_shuffle(&"12".parse().unwrap(), &"231".parse().unwrap()) == listed;

    for m in 1..=5usize {
        for n in 1..=(6 - m) {
            let left = enumerate_essential_simple(m).unwrap();
            let right = enumerate_essential_simple(n).unwrap();
            ok &= left.par_iter().all(|a| {
                right.iter().all(|b| closure_holds(m, a, n, b))
            });
        }
    }

    let seq: BirationalSequence = "((0,0),(1/2,0),(1/3,0),(1/2,0),(0,0))".parse().unwrap();
    let probe = deconcatenation_probe(&seq, 4).unwrap();
    ok &= probe.incoherences.iter().any(|w| {
        w.class_bottom == "24153".parse().unwrap()
            && w.observed == ("2314".parse().unwrap(), "1".parse().unwrap())
            && w.missing == ("2341".parse().unwrap(), "1".parse().unwrap())
    });

    use num::BigRational;
    for n in 1..=5usize {
        ok &= (0u32..(1 << (2 * n))).into_par_iter().all(|mask| {
            let pairs = (0..n)
                .map(|k| {
                    (
                        BigRational::from_integer((((mask >> (2 * k)) & 1) as i64).into()),
                        BigRational::from_integer((((mask >> (2 * k + 1)) & 1) as i64).into()),
                    )
                })
                .collect();
            let s = BirationalSequence::new(pairs).unwrap();
            (0..=n).all(|k| deconcatenation_probe(&s, k).unwrap().coherent())
        });
    }
    report(9, "shuffle example, product closure m+n ≤ 6, Hopf probe", ok);
}

#[test]
fn criterion_10_birational_round_trip() {
    let ideals = enumerate_essential_simple(5).unwrap();
    let mut ok = ideals.len() == 196
        && ideals.par_iter().all(|a| {
            realize_birational(a)
                .and_then(|s| birational_congruence(&s))
                .map_or(false, |back| back == *a)
        });
    let worked: BirationalSequence = "((0,0),(1/2,1/2),(1/3,1/2),(1/2,1/2),(1,1))"
        .parse()
        .unwrap();
    ok &= birational_congruence(&worked).unwrap().minimal_non_arcs()
        == vec![Arc::down(1, 4), Arc::up(1, 5), Arc::down(2, 5)];
    report(10, "birational realization round-trips on all 196 ideals at n = 5", ok);
}

#[test]
fn criterion_11_quiver_translation() {
    let words: Vec<String> = quiver_generators(&catalog::sylvester(4))
        .unwrap()
        .iter()
        .map(|w| w.to_string())
        .collect();
    let mut ok = words == ["b2.b1", "b3.b2"];
    for n in 1..=5usize {
        for a in enumerate_simple(n, false).unwrap() {
            let gens = quiver_generators(&a).unwrap();
            let distinct: BTreeSet<String> = gens.iter().map(|w| w.to_string()).collect();
            let mna = a.minimal_non_arcs();
            let basic = mna.iter().filter(|x| x.is_basic()).count();
            // basic forbidden arcs contribute one word per orientation
            ok &= distinct.len() == gens.len() && gens.len() == mna.len() + basic;
        }
    }
    report(11, "quiver generators match minimal non-arcs for simple ideals n ≤ 5", ok);
}
