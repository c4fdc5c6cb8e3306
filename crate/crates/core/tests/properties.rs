mod props;

macro_rules! suite {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                props::$name().unwrap();
            }
        )*
    };
}

suite!(
    scalar_ring_laws,
    precision_soundness,
    mth_roots_of_units,
    composition_laws,
    weierstrass_multiply_back,
    series_roots,
    newton_root_bound,
    solve_commuting_multiplicative,
    lubin_log_agreement,
    lubin_tate_laws,
    simple_roots_of_iterates,
    endomorphism_ring_action,
    build_f0_roundtrip,
);
