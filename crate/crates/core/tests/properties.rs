use geocurve::curve::{metric_g, srv_reconstruct, srv_transform, sup_distance, CurveTangent, DiscreteCurve};
use geocurve::io::{read_curve, write_curve};
use geocurve::manifold::{
    curvature_tensor, exp_point, log_point, metric_inner, parallel_transport, transport_between, Geometry,
    ManifoldPoint, TangentVector,
};
use geocurve::radar::burg_reflection;
use num_complex::Complex64;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = ManifoldPoint> {
    (-5.0..5.0f64, 0.1..10.0f64).prop_map(|(x, y)| ManifoldPoint::hyperbolic(x, y).unwrap())
}

fn vector_at(p: ManifoldPoint) -> impl Strategy<Value = TangentVector> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(move |(a, b)| TangentVector::new(p, a * p.y(), b * p.y()).unwrap())
}

fn point_and_vectors() -> impl Strategy<Value = (TangentVector, TangentVector, TangentVector)> {
    point().prop_flat_map(|p| (vector_at(p), vector_at(p), vector_at(p)))
}

fn smooth_curve() -> impl Strategy<Value = DiscreteCurve> {
    (-1.0..1.0f64, 0.8..2.0f64, 0.3..1.5f64, -0.3..0.5f64, -0.08..0.08f64, 5usize..40).prop_map(|(x0, y0, ax, ay, b, n)| {
        DiscreteCurve::from_fn(Geometry::Hyperbolic, n, |t| (x0 + ax * t + b * (3.0 * t).sin(), y0 + ay * t * t + b * t))
            .unwrap()
    })
}

proptest! {
    #[test]
    fn log_inverts_exp((v, _, _) in point_and_vectors()) {
        let w = log_point(&v.base(), &exp_point(&v).unwrap()).unwrap();
        let y = v.base().y();
        prop_assert!((w.dx - v.dx).abs() < 1e-9 * y && (w.dy - v.dy).abs() < 1e-9 * y);
    }

    #[test]
    fn transport_is_an_isometry((u, v, _) in point_and_vectors(), q in point()) {
        let (pu, pv) = (parallel_transport(&u, &q).unwrap(), parallel_transport(&v, &q).unwrap());
        let before = metric_inner(&u, &v).unwrap();
        let after = metric_inner(&pu, &pv).unwrap();
        prop_assert!((before - after).abs() < 1e-9 * (1.0 + before.abs()));
    }

    #[test]
    fn transport_there_and_back_is_identity(p in point(), q in point()) {
        let loop_map = transport_between(&p, &q).unwrap().then(&transport_between(&q, &p).unwrap());
        prop_assert!((loop_map.scale() - 1.0).abs() < 1e-12);
        prop_assert!(loop_map.angle().abs() < 1e-12);
    }

    #[test]
    fn log_is_antisymmetric_in_length(p in point(), q in point()) {
        let a = log_point(&p, &q).unwrap();
        let b = log_point(&q, &p).unwrap();
        let (na, nb) = (metric_inner(&a, &a).unwrap().sqrt(), metric_inner(&b, &b).unwrap().sqrt());
        prop_assert!((na - nb).abs() < 1e-9 * (1.0 + na));
    }

    #[test]
    fn curvature_symmetries((x, y, z) in point_and_vectors()) {
        let r = |a: &TangentVector, b: &TangentVector, c: &TangentVector| curvature_tensor(a, b, c).unwrap();
        let bianchi = r(&x, &y, &z) + r(&y, &z, &x) + r(&z, &x, &y);
        let anti = r(&x, &y, &z) + r(&y, &x, &z);
        let scale = x.base().y().powi(3);
        prop_assert!(bianchi.dx.abs() < 1e-9 * scale && bianchi.dy.abs() < 1e-9 * scale);
        prop_assert!(anti.dx.abs() < 1e-9 * scale && anti.dy.abs() < 1e-9 * scale);
        // ⟨R(X,Y)Z, W⟩ = −⟨R(X,Y)W, Z⟩ with W = X
        let lhs = metric_inner(&r(&x, &y, &z), &x).unwrap();
        let rhs = -metric_inner(&r(&x, &y, &x), &z).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn metric_is_symmetric_and_positive(c in smooth_curve(), a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let h = CurveTangent::from_fn(&c, |t, p| [a * p.y(), (0.3 + b * t) * p.y()]).unwrap();
        let k = CurveTangent::from_fn(&c, |t, p| [b * t * p.y(), -a * p.y()]).unwrap();
        let (hk, kh) = (metric_g(&c, &h, &k).unwrap(), metric_g(&c, &k, &h).unwrap());
        prop_assert!((hk - kh).abs() < 1e-12 * (1.0 + hk.abs()));
        prop_assert!(metric_g(&c, &h, &h).unwrap() > 0.0);
    }

    #[test]
    fn srv_roundtrip(c in smooth_curve()) {
        let back = srv_reconstruct(c[0], &srv_transform(&c).unwrap()).unwrap();
        prop_assert!(sup_distance(&back, &c).unwrap() < 1e-9);
    }

    #[test]
    fn curve_json_roundtrip_is_value_identical(c in smooth_curve()) {
        prop_assert_eq!(read_curve(&write_curve(&c)).unwrap(), c);
    }

    #[test]
    fn burg_coefficients_stay_in_the_disk(
        samples in proptest::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 2..80),
        order in 1usize..10,
    ) {
        let w: Vec<Complex64> = samples.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let order = order.min(w.len() - 1);
        let f = burg_reflection(&w, order).unwrap();
        prop_assert!(f.power >= 0.0);
        prop_assert!(f.coefficients.iter().all(|mu| mu.norm() < 1.0));
    }
}
