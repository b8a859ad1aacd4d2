// Every example must run to completion.

mod design_file {
    include!("../examples/design_file.rs");

    #[test]
    fn runs() {
        main().unwrap();
    }
}

mod design_pixel_array {
    include!("../examples/design_pixel_array.rs");

    #[test]
    fn runs() {
        main().unwrap();
    }
}

mod full_detection_ladder {
    include!("../examples/full_detection_ladder.rs");

    #[test]
    fn runs() {
        main().unwrap();
    }
}

mod growth_sweep {
    include!("../examples/growth_sweep.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod pnr_counter {
    include!("../examples/pnr_counter.rs");

    #[test]
    fn runs() {
        main().unwrap();
    }
}

mod reproduce_tables {
    include!("../examples/reproduce_tables.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod two_photon_ladder {
    include!("../examples/two_photon_ladder.rs");

    #[test]
    fn runs() {
        main().unwrap();
    }
}

mod verify_and_decode {
    include!("../examples/verify_and_decode.rs");

    #[test]
    fn runs() {
        main().unwrap();
    }
}
