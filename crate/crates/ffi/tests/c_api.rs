use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use obstacle1d_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe {
        obs_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn full_pipeline_matches_rust_api() {
    unsafe {
        let mut mesh = ptr::null_mut();
        assert_eq!(obs_mesh_uniform(161, &mut mesh), ObsStatus::Ok);
        let n = obs_mesh_n_nodes(mesh);
        assert_eq!(n, 161);

        let mut uz = ptr::null_mut();
        assert_eq!(
            obs_uzawa_solve(-14.0, -1.0, mesh, 10.0, 2000, &mut uz),
            ObsStatus::Ok
        );
        let mut v = vec![0.0; n];
        assert_eq!(
            obs_uzawa_feasible_values(uz, -1.0, v.as_mut_ptr(), n),
            ObsStatus::Ok
        );
        assert!(v.iter().all(|&x| x >= -1.0));
        let mut mu = vec![0.0; n - 1];
        assert_eq!(
            obs_uzawa_multiplier(uz, mu.as_mut_ptr(), n - 1),
            ObsStatus::Ok
        );
        assert!(mu.iter().all(|&m| m >= 0.0));

        let (mut half, mut gap) = (0.0, 0.0);
        assert_eq!(
            obs_half_energy_error(-14.0, -1.0, mesh, v.as_ptr(), n, &mut half),
            ObsStatus::Ok
        );
        assert_eq!(
            obs_energy_gap(-14.0, -1.0, mesh, v.as_ptr(), n, &mut gap),
            ObsStatus::Ok
        );
        assert!(gap >= half && half > 0.0);

        let config = obs_majorant_config_default();
        let mut maj = ptr::null_mut();
        assert_eq!(
            obs_majorant_minimize(-14.0, -1.0, mesh, v.as_ptr(), n, &config, &mut maj),
            ObsStatus::Ok
        );
        let mut b = ObsBreakdown::default();
        assert_eq!(obs_majorant_breakdown(maj, &mut b), ObsStatus::Ok);
        assert!(b.total >= gap - 1e-12);
        assert!((b.term_flux + b.term_residual + b.term_obstacle - b.total).abs() < 1e-15);

        let (mut ie, mut im) = (0.0, 0.0);
        assert_eq!(
            obs_efficiency_indices(half, gap, b.total, &mut ie, &mut im),
            ObsStatus::Ok
        );
        assert!((1.0..1.05).contains(&im));

        let mut tau = vec![0.0; n];
        assert_eq!(obs_majorant_flux(maj, tau.as_mut_ptr(), n), ObsStatus::Ok);
        assert!(tau.iter().all(|t| t.is_finite()));

        obs_majorant_free(maj);
        obs_uzawa_free(uz);
        obs_mesh_free(mesh);
    }
}

#[test]
fn errors_are_reported_with_messages() {
    unsafe {
        let mut mesh = ptr::null_mut();
        assert_eq!(obs_mesh_uniform(2, &mut mesh), ObsStatus::InvalidMesh);
        assert!(mesh.is_null());
        assert!(last_error().contains("mesh"));

        assert_eq!(obs_mesh_uniform(5, ptr::null_mut()), ObsStatus::NullPointer);

        let mut e = 0.0;
        assert_eq!(
            obs_exact_energy(1.0, -1.0, &mut e),
            ObsStatus::InvalidArgument
        );
        assert_eq!(obs_exact_energy(-16.0, -1.0, &mut e), ObsStatus::Ok);
        assert!((e - (-16.0 * -1.0 * (4.0 / 3.0 * 0.125_f64.sqrt() - 1.0))).abs() < 1e-12);

        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(
            obs_efficiency_indices(0.0, 1.0, 1.0, &mut a, &mut b),
            ObsStatus::UndefinedIndex
        );

        assert_eq!(obs_mesh_uniform(5, &mut mesh), ObsStatus::Ok);
        let bad = [0.0, -2.0, -2.0, -2.0, 0.0];
        let config = obs_majorant_config_default();
        let mut maj = ptr::null_mut();
        assert_eq!(
            obs_majorant_minimize(-14.0, -1.0, mesh, bad.as_ptr(), 5, &config, &mut maj),
            ObsStatus::Infeasible
        );
        assert_eq!(
            obs_majorant_minimize(-14.0, -1.0, mesh, bad.as_ptr(), 4, &config, &mut maj),
            ObsStatus::IncompatibleMesh
        );

        let mut uz = ptr::null_mut();
        assert_eq!(
            obs_uzawa_solve(-14.0, -1.0, mesh, 10.0, 10, &mut uz),
            ObsStatus::Ok
        );
        let mut small = [0.0; 3];
        assert_eq!(
            obs_uzawa_values(uz, small.as_mut_ptr(), 3),
            ObsStatus::BufferTooSmall
        );
        assert!(last_error().contains("need 5"));
        obs_uzawa_free(uz);
        obs_mesh_free(mesh);
        obs_mesh_free(ptr::null_mut());
    }
}

#[test]
fn error_message_truncates_and_reports_length() {
    unsafe {
        let mut mesh = ptr::null_mut();
        obs_mesh_uniform(1, &mut mesh);
        let full = obs_last_error_message(ptr::null_mut(), 0);
        let mut buf = [1 as std::ffi::c_char; 4];
        assert_eq!(obs_last_error_message(buf.as_mut_ptr(), 4), full);
        assert_eq!(buf[3], 0);
    }
}

#[test]
fn header_declares_api_and_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/obstacle1d.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "obs_mesh_uniform",
        "obs_uzawa_solve",
        "obs_majorant_minimize",
        "obs_last_error_message",
        "OBS_STATUS_OK",
        "typedef struct ObsMesh ObsMesh",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, "#include \"obstacle1d.h\"\nint main(void) { ObsMajorantConfig c = obs_majorant_config_default(); return (int)c.inner; }\n").unwrap();
    let Ok(status) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
