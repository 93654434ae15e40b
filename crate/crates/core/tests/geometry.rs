mod common;

use common::{elementary_product, quat_geodesic_deg};
use posesynth::geometry::{
    euler_to_rotmat, geodesic_angle, normalize_orientation, pose_loss, rotmat_to_euler, wrap_degrees, LossWeights,
    Orientation, Pose, Rotation, Vec3,
};
use proptest::prelude::*;

fn o(p: f64, y: f64, r: f64) -> Orientation {
    Orientation::new(p, y, r)
}

fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_degrees(a - b).abs()
}

#[test]
fn zero_is_identity() {
    let r = euler_to_rotmat(&o(0.0, 0.0, 0.0)).unwrap();
    assert_eq!(r.matrix().max_abs_diff(Rotation::<f64>::identity().matrix()), 0.0);
}

#[test]
fn yaw_90_takes_z_to_x() {
    let r = euler_to_rotmat(&o(0.0, 90.0, 0.0)).unwrap();
    let v = r.apply(Vec3::new(0.0, 0.0, 1.0));
    assert_eq!((v.x, v.y, v.z), (1.0, 0.0, 0.0));
}

#[test]
fn matches_elementary_product() {
    let r = euler_to_rotmat(&o(30.0, 40.0, 50.0)).unwrap();
    let m = elementary_product(30.0, 40.0, 50.0);
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert!((r.matrix()[(i, j)] - v).abs() < 1e-14);
        }
    }
}

#[test]
fn decompose_examples() {
    let id = rotmat_to_euler(&Rotation::<f64>::identity()).orientation;
    assert_eq!((id.pitch, id.yaw, id.roll), (0.0, 0.0, 0.0));

    let d = rotmat_to_euler(&euler_to_rotmat(&o(10.0, 20.0, 30.0)).unwrap()).orientation;
    assert!((d.pitch - 10.0).abs() < 1e-9 && (d.yaw - 20.0).abs() < 1e-9 && (d.roll - 30.0).abs() < 1e-9);

    let g = rotmat_to_euler(&euler_to_rotmat(&o(-90.0, 55.0, 0.0)).unwrap());
    assert!(g.gimbal_locked);
    assert_eq!(g.orientation.pitch, -90.0);
    assert_eq!(g.orientation.roll, 0.0);
    assert!((g.orientation.yaw - 55.0).abs() < 1e-9);
}

#[test]
fn geodesic_examples() {
    let a = o(10.0, 20.0, 30.0);
    assert!(geodesic_angle(&a, &a).unwrap() < 1e-12);
    assert!((geodesic_angle(&o(0.0, 0.0, 0.0), &o(0.0, 90.0, 0.0)).unwrap() - 90.0).abs() < 1e-12);
    let b = o(15.0, 25.0, 35.0);
    assert!((geodesic_angle(&a, &b).unwrap() - quat_geodesic_deg(&a, &b)).abs() < 1e-9);
}

#[test]
fn loss_examples() {
    let w = LossWeights::default();
    let gt = Pose::from_array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    assert_eq!(pose_loss(&gt, &gt, &w), 0.0);
    let pred = Pose::from_array([4.0, 6.0, 3.0, 4.0, 5.0, 6.0]);
    assert_eq!(pose_loss(&pred, &gt, &w), 5.0);
    let a = Pose::from_array([0.0, 0.0, 0.0, 0.0, 179.0, 0.0]);
    let b = Pose::from_array([0.0, 0.0, 0.0, 0.0, -179.0, 0.0]);
    assert_eq!(pose_loss(&a, &b, &w), 2.0);
}

#[test]
fn normalize_examples() {
    let n = normalize_orientation(&o(0.0, 360.0, 0.0));
    assert_eq!((n.pitch, n.yaw, n.roll), (0.0, 0.0, 0.0));
    let n = normalize_orientation(&o(0.0, 190.0, 0.0));
    assert_eq!((n.pitch, n.yaw, n.roll), (0.0, -170.0, 0.0));
    let src = o(100.0, 0.0, 0.0);
    let n = normalize_orientation(&src);
    assert!(n.pitch.abs() <= 90.0);
    let (a, b) = (euler_to_rotmat(&src).unwrap(), euler_to_rotmat(&n).unwrap());
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
}

#[test]
fn f32_agrees_with_f64() {
    let a = Orientation::<f32>::new(10.0, 20.0, 30.0);
    let b = Orientation::<f32>::new(15.0, 25.0, 35.0);
    let g32 = geodesic_angle(&a, &b).unwrap() as f64;
    let g64 = geodesic_angle(&a.cast::<f64>(), &b.cast::<f64>()).unwrap();
    assert!((g32 - g64).abs() < 1e-3);
}

fn orientation(max_pitch: f64) -> impl Strategy<Value = Orientation> {
    (-max_pitch..max_pitch, -180.0..180.0, -180.0..180.0).prop_map(|(p, y, r)| o(p, y, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn round_trip(src in orientation(89.9)) {
        let back = rotmat_to_euler(&euler_to_rotmat(&src).unwrap()).orientation;
        let want = normalize_orientation(&src);
        prop_assert!((back.pitch - want.pitch).abs() <= 1e-7);
        prop_assert!(angle_diff(back.yaw, want.yaw) <= 1e-7);
        prop_assert!(angle_diff(back.roll, want.roll) <= 1e-7);
    }

    #[test]
    fn rotations_are_proper(p in -720.0..720.0f64, y in -720.0..720.0f64, r in -720.0..720.0f64) {
        let m = *euler_to_rotmat(&o(p, y, r)).unwrap().matrix();
        prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
        let mtm = m.transpose() * m;
        prop_assert!(mtm.max_abs_diff(&posesynth::geometry::Mat3::identity()) < 1e-12);
    }

    #[test]
    fn geodesic_symmetric_bounded(a in orientation(90.0), b in orientation(90.0)) {
        let ab = geodesic_angle(&a, &b).unwrap();
        let ba = geodesic_angle(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!((0.0..=180.0).contains(&ab));
        prop_assert!((ab - quat_geodesic_deg(&a, &b)).abs() < 1e-6);
    }

    #[test]
    fn geodesic_zero_on_equivalent_orientations(a in orientation(180.0)) {
        prop_assert!(geodesic_angle(&a, &normalize_orientation(&a)).unwrap() < 1e-9);
    }

    #[test]
    fn unit_weights_give_wrapped_norm(
        a in prop::array::uniform6(-400.0..400.0f64),
        b in prop::array::uniform6(-400.0..400.0f64),
    ) {
        let (pa, pb) = (Pose::from_array(a), Pose::from_array(b));
        let d: f64 = (0..6)
            .map(|i| if i < 3 { a[i] - b[i] } else { wrap_degrees(a[i] - b[i]) })
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        prop_assert!((pose_loss(&pa, &pb, &LossWeights::default()) - d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn weight_scales_component_quadratically(
        a in prop::array::uniform6(-50.0..50.0f64),
        b in prop::array::uniform6(-50.0..50.0f64),
        k in 0.1..10.0f64,
        idx in 0usize..6,
    ) {
        let (pa, pb) = (Pose::from_array(a), Pose::from_array(b));
        let base = pose_loss(&pa, &pb, &LossWeights::default());
        let mut w = [1.0; 6];
        w[idx] = k;
        let scaled = pose_loss(&pa, &pb, &LossWeights::new(w).unwrap());
        let mut zero = [1.0; 6];
        zero[idx] = 0.0;
        let rest = pose_loss(&pa, &pb, &LossWeights::new(zero).unwrap());
        let component = base * base - rest * rest;
        let expect = rest * rest + k * k * component;
        prop_assert!((scaled * scaled - expect).abs() <= 1e-8 * expect.max(1.0));
    }
}
