//! Built-in D2h, D6h and D5d groups. Elements are generated from explicit
//! Cartesian operations so that representation matrices can be built for them.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use super::{CharacterTable, ConjugacyClass, DescentMap, GroupElement, Irrep, PointGroup};
use crate::error::{Error, Result};
use crate::linalg::C64;

pub const BUILTIN_GROUPS: [&str; 3] = ["D2h", "D6h", "D5d"];

fn rot_z(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Two-fold rotation about the in-plane axis at angle `phi` from x.
fn c2_axis(phi: f64) -> Matrix3<f64> {
    let u = Vector3::new(phi.cos(), phi.sin(), 0.0);
    2.0 * u * u.transpose() - Matrix3::identity()
}

struct ClassSpec {
    label: &'static str,
    ops: Vec<Matrix3<f64>>,
}

fn class(label: &'static str, ops: Vec<Matrix3<f64>>) -> ClassSpec {
    ClassSpec { label, ops }
}

fn assemble(
    name: &str,
    classes: Vec<ClassSpec>,
    irreps: &[(&str, usize)],
    rows: Vec<Vec<f64>>,
) -> PointGroup {
    let mut elements = Vec::new();
    let mut conj = Vec::new();
    for spec in &classes {
        conj.push(ConjugacyClass {
            label: spec.label.to_string(),
            size: spec.ops.len(),
        });
        for (m, op) in spec.ops.iter().enumerate() {
            let id = if spec.ops.len() == 1 {
                spec.label.to_string()
            } else {
                format!("{}_{}", spec.label, m + 1)
            };
            elements.push(GroupElement {
                id,
                class_label: spec.label.to_string(),
                cartesian: Some(*op),
            });
        }
    }
    let table = CharacterTable {
        group_name: name.to_string(),
        irreps: irreps
            .iter()
            .map(|&(label, dim)| Irrep {
                label: label.to_string(),
                dim,
            })
            .collect(),
        classes: conj,
        chi: rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| C64::new(x, 0.0)).collect())
            .collect(),
    };
    PointGroup::new(name, elements, table).expect("built-in group is consistent")
}

fn d2h() -> PointGroup {
    let inv = -Matrix3::identity();
    let classes = vec![
        class("E", vec![Matrix3::identity()]),
        class("C2", vec![rot_z(PI)]),
        class("C2'", vec![c2_axis(0.0)]),
        class("C2''", vec![c2_axis(PI / 2.0)]),
        class("i", vec![inv]),
        class("sigma_h", vec![inv * rot_z(PI)]),
        class("sigma_v", vec![inv * c2_axis(PI / 2.0)]),
        class("sigma_d", vec![inv * c2_axis(0.0)]),
    ];
    let irreps = [
        ("Ag", 1),
        ("Au", 1),
        ("B1g", 1),
        ("B1u", 1),
        ("B2g", 1),
        ("B2u", 1),
        ("B3g", 1),
        ("B3u", 1),
    ];
    let rows = vec![
        vec![1., 1., 1., 1., 1., 1., 1., 1.],
        vec![1., 1., 1., 1., -1., -1., -1., -1.],
        vec![1., 1., -1., -1., 1., 1., -1., -1.],
        vec![1., 1., -1., -1., -1., -1., 1., 1.],
        vec![1., -1., -1., 1., 1., -1., 1., -1.],
        vec![1., -1., -1., 1., -1., 1., -1., 1.],
        vec![1., -1., 1., -1., 1., -1., -1., 1.],
        vec![1., -1., 1., -1., -1., 1., 1., -1.],
    ];
    assemble("D2h", classes, &irreps, rows)
}

fn d6h() -> PointGroup {
    let inv = -Matrix3::identity();
    let axes_a: Vec<f64> = [30.0f64, 90.0, 150.0].iter().map(|d| d.to_radians()).collect();
    let axes_b: Vec<f64> = [0.0f64, 60.0, 120.0].iter().map(|d| d.to_radians()).collect();
    let classes = vec![
        class("E", vec![Matrix3::identity()]),
        class("C6", vec![rot_z(PI / 3.0), rot_z(5.0 * PI / 3.0)]),
        class("C3", vec![rot_z(2.0 * PI / 3.0), rot_z(4.0 * PI / 3.0)]),
        class("C2''", vec![rot_z(PI)]),
        class("C2", axes_a.iter().map(|&p| c2_axis(p)).collect()),
        class("C2'", axes_b.iter().map(|&p| c2_axis(p)).collect()),
        class("sigma_h", vec![inv * rot_z(PI)]),
        class("sigma_v", axes_b.iter().map(|&p| inv * c2_axis(p)).collect()),
        class("sigma_d", axes_a.iter().map(|&p| inv * c2_axis(p)).collect()),
        class(
            "S6",
            vec![inv * rot_z(2.0 * PI / 3.0), inv * rot_z(4.0 * PI / 3.0)],
        ),
        class("S3", vec![inv * rot_z(PI / 3.0), inv * rot_z(5.0 * PI / 3.0)]),
        class("i", vec![inv]),
    ];
    let irreps = [
        ("A1g", 1),
        ("A1u", 1),
        ("A2g", 1),
        ("A2u", 1),
        ("B1g", 1),
        ("B1u", 1),
        ("B2g", 1),
        ("B2u", 1),
        ("E1g", 2),
        ("E1u", 2),
        ("E2g", 2),
        ("E2u", 2),
    ];
    let rows = vec![
        vec![1., 1., 1., 1., 1., 1., 1., 1., 1., 1., 1., 1.],
        vec![1., 1., 1., 1., 1., 1., -1., -1., -1., -1., -1., -1.],
        vec![1., 1., 1., 1., -1., -1., 1., -1., -1., 1., 1., 1.],
        vec![1., 1., 1., 1., -1., -1., -1., 1., 1., -1., -1., -1.],
        vec![1., -1., 1., -1., 1., -1., -1., -1., 1., 1., -1., 1.],
        vec![1., -1., 1., -1., 1., -1., 1., 1., -1., -1., 1., -1.],
        vec![1., -1., 1., -1., -1., 1., -1., 1., -1., 1., -1., 1.],
        vec![1., -1., 1., -1., -1., 1., 1., -1., 1., -1., 1., -1.],
        vec![2., 1., -1., -2., 0., 0., -2., 0., 0., -1., 1., 2.],
        vec![2., 1., -1., -2., 0., 0., 2., 0., 0., 1., -1., -2.],
        vec![2., -1., -1., 2., 0., 0., 2., 0., 0., -1., -1., 2.],
        vec![2., -1., -1., 2., 0., 0., -2., 0., 0., 1., 1., -2.],
    ];
    assemble("D6h", classes, &irreps, rows)
}

fn d5d() -> PointGroup {
    let inv = -Matrix3::identity();
    let xp = (-1.0 + 5f64.sqrt()) / 2.0;
    let xm = (-1.0 - 5f64.sqrt()) / 2.0;
    let axes: Vec<f64> = (0..5).map(|j| j as f64 * PI / 5.0).collect();
    let c5 = |k: f64| rot_z(2.0 * PI * k / 5.0);
    let classes = vec![
        class("E", vec![Matrix3::identity()]),
        class("C5", vec![c5(1.0), c5(4.0)]),
        class("C5^2", vec![c5(2.0), c5(3.0)]),
        class("C2'", axes.iter().map(|&p| c2_axis(p)).collect()),
        class("i", vec![inv]),
        class("S10^3", vec![inv * c5(1.0), inv * c5(4.0)]),
        class("S10", vec![inv * c5(2.0), inv * c5(3.0)]),
        class("sigma_d", axes.iter().map(|&p| inv * c2_axis(p)).collect()),
    ];
    let irreps = [
        ("A1g", 1),
        ("A1u", 1),
        ("A2g", 1),
        ("A2u", 1),
        ("E1g", 2),
        ("E1u", 2),
        ("E2g", 2),
        ("E2u", 2),
    ];
    // The E2u / sigma_d entry is 0: a +1 there breaks row orthogonality.
    let rows = vec![
        vec![1., 1., 1., 1., 1., 1., 1., 1.],
        vec![1., 1., 1., 1., -1., -1., -1., -1.],
        vec![1., 1., 1., -1., 1., 1., 1., -1.],
        vec![1., 1., 1., -1., -1., -1., -1., 1.],
        vec![2., xp, xm, 0., 2., xp, xm, 0.],
        vec![2., xp, xm, 0., -2., -xp, -xm, 0.],
        vec![2., xm, xp, 0., 2., xm, xp, 0.],
        vec![2., xm, xp, 0., -2., -xm, -xp, 0.],
    ];
    assemble("D5d", classes, &irreps, rows)
}

/// Looks up one of [`BUILTIN_GROUPS`] (case-insensitive).
pub fn builtin_group(name: &str) -> Result<PointGroup> {
    match name.to_ascii_lowercase().as_str() {
        "d2h" => Ok(d2h()),
        "d6h" => Ok(d6h()),
        "d5d" => Ok(d5d()),
        _ => Err(Error::UnknownGroup {
            name: name.to_string(),
            available: BUILTIN_GROUPS.join(", "),
        }),
    }
}

/// Correlation of D6h irreps with the D2h subgroup (C2' along x, C2'' along y).
pub fn d6h_to_d2h() -> DescentMap {
    let pairs: [(&str, &[&str]); 12] = [
        ("A1g", &["Ag"]),
        ("A1u", &["Au"]),
        ("A2g", &["B1g"]),
        ("A2u", &["B1u"]),
        ("B1g", &["B2g"]),
        ("B1u", &["B2u"]),
        ("B2g", &["B3g"]),
        ("B2u", &["B3u"]),
        ("E1g", &["B2g", "B3g"]),
        ("E1u", &["B2u", "B3u"]),
        ("E2g", &["Ag", "B1g"]),
        ("E2u", &["Au", "B1u"]),
    ];
    DescentMap {
        from: "D6h".into(),
        to: "D2h".into(),
        map: pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect()))
            .collect(),
    }
}
