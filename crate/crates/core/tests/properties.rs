use proptest::prelude::*;
use twistkit_core::exterior::Form;
use twistkit_core::twist::twisted_differential;
use twistkit_core::zoo::make_example;
use twistkit_core::Scalar;

fn form_on(dim: usize, degree: usize) -> impl Strategy<Value = Form> {
    let masks: Vec<u32> = (0u32..1 << dim).filter(|m| m.count_ones() as usize == degree).collect();
    prop::collection::vec(-3i64..=3, masks.len()).prop_map(move |coeffs| {
        masks
            .iter()
            .zip(coeffs)
            .fold(Form::zero(degree), |acc, (&m, c)| acc.add(&Form::monomial(m, Scalar::from_int(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(alpha in (0usize..=3).prop_flat_map(|p| form_on(6, p))) {
        let ex = make_example("su2_su2").unwrap();
        let m = &ex.model;
        prop_assert!(m.d(&m.d(&alpha).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(alpha in form_on(4, 1), beta in form_on(4, 2)) {
        let ex = make_example("kodaira_thurston").unwrap();
        let m = &ex.model;
        let lhs = m.d(&alpha.wedge(&beta)).unwrap();
        let rhs = m.d(&alpha).unwrap().wedge(&beta).sub(&alpha.wedge(&m.d(&beta).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_d_squared_vanishes(alpha in form_on(6, 2)) {
        let ex = make_example("skt_t2xt2_bundle").unwrap();
        let (m, t) = (&ex.model, ex.twist.as_ref().unwrap());
        let once = twisted_differential(m, t, &alpha).unwrap();
        prop_assert!(twisted_differential(m, t, &once).unwrap().is_zero());
    }
}
