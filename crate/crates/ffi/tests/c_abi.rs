use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use filippov_ffi::*;

fn scenario_path(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn tampered_path() -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/adaptive_tampered.scn");
    CString::new(p.to_str().unwrap()).unwrap()
}

fn load(name: &str) -> *mut FlScenario {
    load_path(scenario_path(name))
}

fn load_path(path: CString) -> *mut FlScenario {
    let mut s = ptr::null_mut();
    let status = unsafe { fl_scenario_load(path.as_ptr(), &mut s) };
    assert_eq!(status, FlStatus::Ok);
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let p = fl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn simulate_sign_through_handles() {
    let s = load("sign.scn");
    unsafe {
        assert_eq!(fl_scenario_dimension(s), 1);
        let mut traj = ptr::null_mut();
        assert_eq!(fl_simulate(s, &mut traj), FlStatus::Ok);
        let n = fl_trajectory_len(traj);
        assert!(n > 2000);
        let (mut t, mut x) = (0.0, [0.0]);
        assert_eq!(fl_trajectory_sample(traj, n - 1, &mut t, x.as_mut_ptr(), 1), FlStatus::Ok);
        assert!((t - 2.0).abs() < 1e-12);
        assert!(x[0].abs() < 1e-6);
        assert_eq!(fl_trajectory_sliding(traj, n - 1), 1);
        assert_eq!(fl_trajectory_sliding(traj, 0), 0);
        assert_eq!(fl_trajectory_sliding(traj, n), -1);
        assert_eq!(fl_trajectory_sample(traj, n, &mut t, x.as_mut_ptr(), 1), FlStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));
        let mut wide = [0.0; 2];
        assert_eq!(fl_trajectory_sample(traj, 0, &mut t, wide.as_mut_ptr(), 2), FlStatus::InvalidArgument);
        fl_trajectory_free(traj);
        fl_scenario_free(s);
    }
}

#[test]
fn derivative_interval_at_surface_and_off_it() {
    let text = CString::new(
        "[system]\ndimension = 1\nmode = simulate\n[surfaces]\ns = x1\n[regions]\n- = 1\n+ = -1\n\
         [lyapunov]\nsurface s = x1\nV[+] = x1\nV[-] = -x1\nW1 = 0.5*x1^2\nW2 = 2*x1^2\nW = 0\n\
         [simulate]\nx0 = 1\ntf = 1\n",
    )
    .unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(fl_scenario_parse(text.as_ptr(), &mut s), FlStatus::Ok);
        let (mut lo, mut hi) = (f64::NAN, f64::NAN);
        assert_eq!(fl_setvalued_derivative(s, [0.0].as_ptr(), 1, 0.0, &mut lo, &mut hi), FlStatus::Ok);
        assert!(lo.abs() <= 1e-9 && hi.abs() <= 1e-9);
        assert_eq!(fl_setvalued_derivative(s, [2.0].as_ptr(), 1, 0.0, &mut lo, &mut hi), FlStatus::Ok);
        assert!((lo + 1.0).abs() <= 1e-9 && (hi + 1.0).abs() <= 1e-9);
        assert_eq!(
            fl_setvalued_derivative(s, [0.0, 0.0].as_ptr(), 2, 0.0, &mut lo, &mut hi),
            FlStatus::InvalidArgument
        );
        fl_scenario_free(s);
    }
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    let missing = CString::new("/no/such/file.scn").unwrap();
    unsafe {
        assert_eq!(fl_scenario_load(missing.as_ptr(), &mut s), FlStatus::LoadError);
        assert!(s.is_null());
        assert!(last_error().contains("/no/such/file.scn"));
        assert_eq!(fl_scenario_load(ptr::null(), &mut s), FlStatus::NullPointer);
        assert_eq!(fl_scenario_load(missing.as_ptr(), ptr::null_mut()), FlStatus::NullPointer);
        let bad = CString::new("[system]\ndimension = 2\n[regions]\n* = x3, 0\n").unwrap();
        assert_eq!(fl_scenario_parse(bad.as_ptr(), &mut s), FlStatus::LoadError);
        assert!(last_error().contains(":4:"), "{}", last_error());
        assert_eq!(fl_simulate(ptr::null(), ptr::null_mut()), FlStatus::NullPointer);
        assert_eq!(fl_scenario_dimension(ptr::null()), 0);
        assert_eq!(fl_trajectory_len(ptr::null()), 0);
        fl_scenario_free(ptr::null_mut());
        fl_trajectory_free(ptr::null_mut());
    }
}

#[test]
fn run_status_matches_exit_codes() {
    let dir = std::env::temp_dir().join(format!("filippov-ffi-run-{}", std::process::id()));
    let out = CString::new(dir.to_str().unwrap()).unwrap();
    let good = load("sign.scn");
    let bad = load_path(tampered_path());
    unsafe {
        assert_eq!(fl_run(good, FlMode::All, out.as_ptr()), FlStatus::Ok);
        assert_eq!(fl_run(bad, FlMode::Check2, out.as_ptr()), FlStatus::CheckFailed);
        assert!(last_error().contains("derivative_bound"));
        assert_eq!(fl_run(bad, FlMode::Simulate, ptr::null()), FlStatus::NullPointer);
        fl_scenario_free(good);
        fl_scenario_free(bad);
    }
    let _ = std::fs::remove_dir_all(dir);
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = crate_dir.join("include");
    assert!(header_dir.join("filippov.h").exists());
    let lib = target_dir().join("libfilippov_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let tmp = std::env::temp_dir().join(format!("filippov-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let exe = tmp.join("smoke");
    let compiled = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(compiled.success());
    let output = Command::new(&exe)
        .arg(scenario_path("sign.scn").to_str().unwrap())
        .arg(tmp.join("out"))
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(output.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&output.stderr));
    let mut lines = stdout.lines();
    let final_line: Vec<&str> = lines.next().unwrap().split(' ').collect();
    assert_eq!(final_line[0], "final");
    assert_eq!(final_line[1].parse::<f64>().unwrap(), 2.0);
    assert!(final_line[2].parse::<f64>().unwrap().abs() < 1e-6);
    assert_eq!(final_line[3], "1");
    assert_eq!(lines.next().unwrap(), "derivative 0 0");
    assert_eq!(lines.next().unwrap(), "run 0");
    let _ = std::fs::remove_dir_all(tmp);
}
