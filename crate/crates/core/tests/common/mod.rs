#![allow(dead_code)]

mod low_levels;

use cartan_core::characters::{ClassShape, TableColumn};
use cartan_core::groups::{CartanType, SubgroupSpec};

#[allow(unused_imports)]
pub use low_levels::LOW_LEVELS;

/// The four low level columns in table order.
pub fn low_level_specs(n: u64) -> [SubgroupSpec; 4] {
    [
        SubgroupSpec::totally(n, CartanType::NonSplit, true).unwrap(),
        SubgroupSpec::totally(n, CartanType::NonSplit, false).unwrap(),
        SubgroupSpec::totally(n, CartanType::Split, true).unwrap(),
        SubgroupSpec::totally(n, CartanType::Split, false).unwrap(),
    ]
}

/// Entry of the 2-power character table for a representative shape.
pub fn appendix_expected(shape: &ClassShape, col: TableColumn, e: u32) -> u64 {
    let p2 = |x: u32| 1u64 << x;
    match *shape {
        ClassShape::Scalar { .. } => match col {
            TableColumn::Borel(r) => 3 * p2(2 * r),
            TableColumn::Torus(0) => 1,
            TableColumn::Torus(r) => 3 * p2(2 * r - 1),
            TableColumn::Split => 3 * p2(2 * e - 1),
            TableColumn::SplitPlus => 3 * p2(2 * e - 2),
            TableColumn::NonSplit => p2(2 * e - 1),
            TableColumn::NonSplitPlus => p2(2 * e - 2),
        },
        ClassShape::Companion { b, .. } if b % 2 == 1 => match col {
            TableColumn::Torus(0) => 1,
            TableColumn::NonSplit => 2,
            TableColumn::NonSplitPlus => 1,
            _ => 0,
        },
        ClassShape::Companion { b, .. } => match col {
            TableColumn::Borel(0) | TableColumn::Torus(0) => 1,
            TableColumn::SplitPlus | TableColumn::NonSplitPlus if b == 0 => p2(e - 1),
            _ => 0,
        },
        ClassShape::Diagonal { k, .. } => match col {
            TableColumn::Borel(r) if r < k => 3 * p2(2 * r),
            TableColumn::Borel(_) => p2(2 * k + 1),
            TableColumn::Torus(0) => 1,
            TableColumn::Torus(r) if r <= k => 3 * p2(2 * r - 1),
            TableColumn::Torus(_) => p2(2 * k + 1),
            TableColumn::Split => p2(2 * k + 1),
            TableColumn::SplitPlus => p2(2 * k),
            _ => 0,
        },
        ClassShape::Block { k, shift, .. } => {
            let borel = |r: u32| {
                if r < k {
                    3 * p2(2 * r)
                } else if r == k && shift != 1 {
                    p2(2 * r)
                } else {
                    0
                }
            };
            match col {
                TableColumn::Borel(r) => borel(r),
                TableColumn::Torus(0) => 1,
                TableColumn::Torus(r) if r <= k => 3 * p2(2 * r - 1),
                TableColumn::Torus(_) => 0,
                TableColumn::NonSplit if shift == 1 => p2(2 * k + 1),
                TableColumn::NonSplitPlus if shift == 1 => p2(2 * k),
                _ => 0,
            }
        }
    }
}

/// (d, eps2, eps3, eps_inf) at p^e, transcribed row by row from the table of
/// local invariants.
pub fn table1_paper(p: u64, e: u32, t: CartanType, plus: bool) -> (u64, u64, u64, u64) {
    let pe1 = p.pow(e - 1);
    let q = p.pow(e);
    match (t, plus) {
        (CartanType::Split, false) => (
            p.pow(2 * e - 1) * (p + 1),
            if p % 4 == 1 { 2 } else { 0 },
            if p % 3 == 1 { 2 } else { 0 },
            pe1 * (p + 1),
        ),
        (CartanType::Split, true) => (
            p.pow(2 * e - 1) * (p + 1) / 2,
            if p == 2 {
                1 << (e - 1)
            } else if p % 4 == 1 {
                1 + pe1 * (p - 1) / 2
            } else {
                pe1 * (p + 1) / 2
            },
            if p % 3 == 1 { 1 } else { 0 },
            if q == 2 { 2 } else { pe1 * (p + 1) / 2 },
        ),
        (CartanType::NonSplit, false) => (
            p.pow(2 * e - 1) * (p - 1),
            if p % 4 == 3 { 2 } else { 0 },
            if p % 3 == 2 { 2 } else { 0 },
            pe1 * (p - 1),
        ),
        (CartanType::NonSplit, true) => (
            p.pow(2 * e - 1) * (p - 1) / 2,
            if p == 2 {
                1 << (e - 1)
            } else if p % 4 == 1 {
                pe1 * (p - 1) / 2
            } else {
                1 + pe1 * (p + 1) / 2
            },
            if p % 3 == 2 { 1 } else { 0 },
            if q == 2 { 1 } else { pe1 * (p - 1) / 2 },
        ),
    }
}

/// Expected N'/H' labels for the exceptional prime power subgroups, keyed by
/// the row names produced by `tables::table2_specs`.
pub fn table2_expected(name: &str) -> Option<cartan_core::groups::GroupLabel> {
    use cartan_core::groups::GroupLabel as L;
    let (kind, arg) = name.split_once('(')?;
    let arg = arg.trim_end_matches(')');
    let (p, e) = match arg.split_once('^') {
        Some((p, e)) => (p.parse::<u64>().ok()?, e.parse::<u32>().ok()?),
        None => (arg.parse().ok()?, 1),
    };
    Some(match (kind, p, e) {
        ("C_ns+", 3, 1) => L::Cyclic(3),
        ("C_s", 2, 1..=3) => L::Psl2TwoPower(e),
        ("C_s", 2, 4) => L::D8SemiZ8,
        ("C_s", 2, _) => L::Z8SquaredSemiZ2,
        ("C_s", 3, 1) => L::Psl2Three,
        ("C_s", 3, _) => L::Z3xS3,
        ("C_s+", 2, 1) => L::Trivial,
        ("C_s+", 2, 2) => L::Cyclic(2),
        ("C_s+", 2, 3) => L::Cyclic(4),
        ("C_s+", 2, _) => L::Cyclic(8),
        ("C_s+", 3, 1) => L::Cyclic(2),
        ("C_s+", 3, _) => L::Cyclic(3),
        ("C_s+", 5, 1) => L::Cyclic(3),
        _ => return None,
    })
}

/// Aut X_H for p^e > 11 outside {16, 27, 32, 64}, by family and prime.
pub fn powerprimes_expected(p: u64, t: CartanType, plus: bool) -> cartan_core::groups::GroupLabel {
    use cartan_core::groups::GroupLabel as L;
    match (t, plus, p) {
        (CartanType::NonSplit, false, _) => L::Cyclic(2),
        (CartanType::NonSplit, true, _) => L::Trivial,
        (CartanType::Split, false, 2) => L::Z8SquaredSemiZ2,
        (CartanType::Split, false, 3) => L::Z3xS3,
        (CartanType::Split, false, _) => L::Cyclic(2),
        (CartanType::Split, true, 2) => L::Cyclic(8),
        (CartanType::Split, true, 3) => L::Cyclic(3),
        (CartanType::Split, true, _) => L::Trivial,
    }
}

/// The newform fixture shipped with the repository, if present.
pub fn fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/newforms.csv")
}

pub fn load_fixture() -> Option<cartan_core::newforms::NewformDB> {
    let path = fixture_path();
    path.exists().then(|| {
        cartan_core::newforms::load_fixtures(&path, cartan_core::newforms::FixtureFormat::Csv).expect("fixture loads")
    })
}
