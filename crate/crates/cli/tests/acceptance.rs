//! One check per acceptance criterion. Each prints a single PASS/FAIL line;
//! the test fails if any criterion fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use tanglegram::antichain::heavy_entries;
use tanglegram::layout::Layout;
use tanglegram::{
    crossing_number, enumerate_tanglegrams, excluded_tanglegrams, is_planar_catergram,
    planarity_tests, rho, rho_layout, FamilyIndex, Label, Permutation, Tanglegram, DEFAULT_CAP,
};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tanglegram"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        start.elapsed(),
    )
}

fn all_perms(n: usize) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if rest.is_empty() {
            out.push(Permutation::new(prefix.clone()).unwrap());
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(k, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

fn random_perm(rng: &mut StdRng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

fn idx(i: usize) -> FamilyIndex {
    FamilyIndex::new(i).unwrap()
}

fn antichain_prefix() -> Outcome {
    let (code, out, took) = cli(&["verify", "antichain", "--max", "6"]);
    let pairs: BTreeSet<(String, String)> = out
        .lines()
        .filter(|l| l.starts_with("pair "))
        .map(|l| {
            let w: Vec<&str> = l.split(' ').collect();
            (w[1].to_string(), w[2].to_string())
        })
        .collect();
    ensure(code == 0, || format!("all-pairs exit {code}"))?;
    ensure(pairs.len() == 15, || {
        format!("{} pairs checked", pairs.len())
    })?;
    ensure(!out.contains("witness="), || {
        "a witness was reported".into()
    })?;
    ensure(took <= Duration::from_secs(120), || {
        format!("all-pairs took {took:?}")
    })?;
    let (code2, out2, took2) = cli(&["verify", "antichain", "--max", "20", "--adjacent-only"]);
    ensure(
        code2 == 0 && out2.trim_end().ends_with("result=PASS"),
        || format!("adjacent exit {code2}"),
    )?;
    ensure(took2 <= Duration::from_secs(60), || {
        format!("adjacent took {took2:?}")
    })?;
    for i in 1..=20 {
        let n = 12 + 2 * i;
        for sigma in rho(idx(i)).bar_set().unwrap() {
            let heavy = heavy_entries(&sigma, 3);
            ensure(heavy.len() == 2, || {
                format!("i={i}: {sigma} has heavy entries {heavy:?}")
            })?;
            ensure(heavy == vec![1, n - 4], || {
                format!("i={i}: heavy entries {heavy:?}")
            })?;
        }
    }
    Ok(format!(
        "15 pairs in {:.2}s, 19 adjacent pairs in {:.2}s, two heavy entries for i<=20",
        took.as_secs_f64(),
        took2.as_secs_f64()
    ))
}

fn chain_prefix() -> Outcome {
    let (code, out, took) = cli(&["verify", "chain", "--max", "15"]);
    let steps: Vec<&str> = out.lines().filter(|l| l.starts_with("step ")).collect();
    ensure(code == 0, || format!("exit {code}"))?;
    ensure(steps.len() == 14, || format!("{} steps", steps.len()))?;
    ensure(
        steps
            .iter()
            .all(|s| s.contains("restriction=true") && s.contains("induced=true")),
        || "a step failed".into(),
    )?;
    for i in 1..15 {
        let small = rho(idx(i)).upside_down();
        let big = rho(idx(i + 1)).upside_down();
        let keep: Vec<usize> = (1..=big.len()).filter(|&p| p != 2 && p != 4).collect();
        ensure(
            big.restrict(&keep).unwrap() == small.tilde().unwrap(),
            || format!("identity fails at i={i}"),
        )?;
    }
    Ok(format!("14 steps in {:.2}s", took.as_secs_f64()))
}

fn family_planarity() -> Outcome {
    for i in 1..=12 {
        ensure(is_planar_catergram(&rho(idx(i))), || {
            format!("rho_{i} has an excluded pattern")
        })?;
        let c = rho_layout(idx(i)).crossings();
        ensure(c == 0, || format!("rho_{i} layout has {c} crossings"))?;
    }
    Ok("rho_1..rho_12 planar with crossing-free closed-form layouts".into())
}

fn excluded_pair() -> Outcome {
    let (e1, e2) = excluded_tanglegrams();
    let reg = planarity_tests(DEFAULT_CAP);
    let oracle = reg.get("oracle").unwrap();
    for (name, t) in [("E1", &e1), ("E2", &e2)] {
        ensure(!oracle.is_planar(t).unwrap(), || {
            format!("{name} reported planar")
        })?;
        let cr = crossing_number(t, DEFAULT_CAP).unwrap().crossings;
        ensure(cr == 1, || format!("{name} crossing number {cr}"))?;
        let sweep = (0..8u64)
            .flat_map(|l| (0..8u64).map(move |r| (l, r)))
            .map(|(l, r)| Layout::from_masks(t, l, r).crossings_by_pairs())
            .min()
            .unwrap();
        ensure(sweep == 1, || format!("{name} 8x8 sweep minimum {sweep}"))?;
    }
    Ok("both non-planar, crossing number 1 by sweep and by 8x8 layouts".into())
}

fn kuratowski_oracle() -> Outcome {
    let reg = planarity_tests(DEFAULT_CAP);
    let (k, o) = (reg.get("kuratowski").unwrap(), reg.get("oracle").unwrap());
    let mut cases: Vec<Tanglegram> = enumerate_tanglegrams(4).unwrap();
    let size_four = cases.len();
    cases.extend(
        all_perms(5)
            .iter()
            .map(|p| Tanglegram::catergram(p).unwrap()),
    );
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..500 {
        let n = rng.gen_range(6..=8);
        cases.push(Tanglegram::catergram(&random_perm(&mut rng, n)).unwrap());
    }
    let mut disagreements = 0;
    let mut planar = 0;
    for t in &cases {
        let a = k.is_planar(t).unwrap();
        disagreements += (a != o.is_planar(t).unwrap()) as usize;
        planar += a as usize;
    }
    ensure(size_four == 13, || {
        format!("{size_four} tanglegrams of size 4")
    })?;
    ensure(disagreements == 0, || {
        format!("{disagreements} disagreements")
    })?;
    Ok(format!(
        "{} cases ({planar} planar), zero disagreements",
        cases.len()
    ))
}

fn bar_set_equivalence() -> Outcome {
    let perms = all_perms(5);
    let forms: Vec<_> = perms
        .iter()
        .map(|p| Tanglegram::catergram(p).unwrap())
        .collect();
    let canon: Vec<_> = forms.iter().map(|t| t.canonical_form()).collect();
    let dists: Vec<_> = forms.iter().map(|t| t.distance_pairs()).collect();
    let bars: Vec<_> = perms.iter().map(|p| p.bar_set().unwrap()).collect();
    let mut pairs = 0;
    let mut equal = 0;
    for a in 0..perms.len() {
        for b in 0..perms.len() {
            pairs += 1;
            let by_form = canon[a] == canon[b];
            let by_dist = dists[a] == dists[b];
            let by_bar = bars[b].contains(&perms[a]);
            ensure(by_form == by_dist && by_dist == by_bar, || {
                format!(
                    "{} vs {}: form={by_form} dist={by_dist} bar={by_bar}",
                    perms[a], perms[b]
                )
            })?;
            equal += by_form as usize;
        }
    }
    Ok(format!("{pairs} ordered pairs agree, {equal} equal"))
}

fn bar_set_sizes() -> Outcome {
    let mut checked = 0;
    for n in 2..=7 {
        for p in all_perms(n) {
            let size = p.bar_set().unwrap().len();
            let e = p.entries();
            let top_pair = BTreeSet::from([e[n - 2], e[n - 1]]) == BTreeSet::from([n - 1, n]);
            ensure(size == 2 || size == 4, || format!("{p}: size {size}"))?;
            ensure((size == 2) == top_pair, || format!("{p}: size {size}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} permutations with n<=7"))
}

fn restriction_is_induced() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=8);
        let pi = random_perm(&mut rng, n);
        let mut a: Vec<usize> = (1..=n).collect();
        a.shuffle(&mut rng);
        a.truncate(rng.gen_range(2..=n));
        a.sort();
        let labels: Vec<Label> = a.iter().map(|&x| Label::from(x)).collect();
        let induced = Tanglegram::catergram(&pi)
            .unwrap()
            .induced_by_left_labels(&labels)
            .unwrap();
        let direct = Tanglegram::catergram(&pi.restrict(&a).unwrap()).unwrap();
        ensure(induced.canonical_form() == direct.canonical_form(), || {
            format!("pi={pi} A={a:?}")
        })?;
    }
    Ok("1000 random (pi, A) pairs".into())
}

fn segments_cross(a: [f64; 4], b: [f64; 4]) -> bool {
    let orient = |px: f64, py: f64, qx: f64, qy: f64, rx: f64, ry: f64| {
        let v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
        if v.abs() < 1e-9 {
            0
        } else {
            v.signum() as i32
        }
    };
    let on = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
        r.0 >= p.0.min(q.0) - 1e-9
            && r.0 <= p.0.max(q.0) + 1e-9
            && r.1 >= p.1.min(q.1) - 1e-9
            && r.1 <= p.1.max(q.1) + 1e-9
    };
    let (p1, p2, p3, p4) = ((a[0], a[1]), (a[2], a[3]), (b[0], b[1]), (b[2], b[3]));
    let d1 = orient(p3.0, p3.1, p4.0, p4.1, p1.0, p1.1);
    let d2 = orient(p3.0, p3.1, p4.0, p4.1, p2.0, p2.1);
    let d3 = orient(p1.0, p1.1, p2.0, p2.1, p3.0, p3.1);
    let d4 = orient(p1.0, p1.1, p2.0, p2.1, p4.0, p4.1);
    (d1 * d2 < 0 && d3 * d4 < 0)
        || (d1 == 0 && on(p3, p4, p1))
        || (d2 == 0 && on(p3, p4, p2))
        || (d3 == 0 && on(p1, p2, p3))
        || (d4 == 0 && on(p1, p2, p4))
}

fn rho_four_drawing() -> Outcome {
    let (code, svg, _) = cli(&["layout", "--rho", "4", "--emit", "svg"]);
    ensure(code == 0, || format!("exit {code}"))?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| e.to_string())?;
    let num = |n: roxmltree::Node, a: &str| n.attribute(a).unwrap().parse::<f64>().unwrap();
    let class = |n: &roxmltree::Node, c: &str| n.attribute("class") == Some(c);
    let mut left: Vec<(f64, String)> = doc
        .descendants()
        .filter(|n| class(n, "left-label"))
        .map(|n| (num(n, "y"), n.text().unwrap().to_string()))
        .collect();
    // SVG y grows downward; the first leaf is drawn at the bottom.
    left.sort_by(|a, b| b.0.total_cmp(&a.0));
    let order: Vec<String> = left.into_iter().map(|x| x.1).collect();
    let expected: Vec<String> = [
        1, 2, 3, 5, 7, 9, 11, 13, 15, 17, 18, 19, 20, 16, 14, 12, 10, 8, 6, 4,
    ]
    .iter()
    .map(|x| x.to_string())
    .collect();
    ensure(order == expected, || format!("left order {order:?}"))?;
    let right = doc
        .descendants()
        .filter(|n| class(n, "right-label"))
        .count();
    ensure(right == 20, || format!("{right} right leaves"))?;
    let segs: Vec<[f64; 4]> = doc
        .descendants()
        .filter(|n| class(n, "matching"))
        .map(|n| [num(n, "x1"), num(n, "y1"), num(n, "x2"), num(n, "y2")])
        .collect();
    ensure(segs.len() == 20, || {
        format!("{} matching segments", segs.len())
    })?;
    let mut hits = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            hits += segments_cross(segs[i], segs[j]) as usize;
        }
    }
    ensure(hits == 0, || format!("{hits} intersecting segment pairs"))?;
    Ok("left order matches, 20 matching segments, 0 intersections".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Check); 9] = [
        ("antichain prefix", antichain_prefix),
        ("chain prefix", chain_prefix),
        ("planarity of the rho family", family_planarity),
        ("excluded pair", excluded_pair),
        ("kuratowski and oracle agree", kuratowski_oracle),
        ("equality three ways on S5", bar_set_equivalence),
        ("bar-set sizes", bar_set_sizes),
        ("restriction is induced", restriction_is_induced),
        ("rho_4 drawing", rho_four_drawing),
    ];
    let mut stdout = std::io::stdout().lock();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let line = match check() {
            Ok(detail) => format!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(reason) => {
                failed += 1;
                format!("criterion {} {name}: FAIL ({reason})", k + 1)
            }
        };
        writeln!(stdout, "{line}").unwrap();
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
