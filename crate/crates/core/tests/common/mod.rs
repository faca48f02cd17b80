use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const GOLDEN_CASES: &[Case] = &[
    Case {
        name: "inspect_torus2_table",
        args: &["inspect", "--builtin", "torus:2"],
        exit: 0,
    },
    Case {
        name: "inspect_torus2_json",
        args: &["inspect", "--file", "torus2.ddm", "--format", "json"],
        exit: 0,
    },
    Case {
        name: "inspect_cpn2",
        args: &["inspect", "--builtin", "cpn:2"],
        exit: 0,
    },
    Case {
        name: "inspect_point_json",
        args: &["inspect", "--builtin", "point", "--format", "json"],
        exit: 0,
    },
    Case {
        name: "inspect_iwasawa",
        args: &["inspect", "--builtin", "iwasawa"],
        exit: 0,
    },
    Case {
        name: "inspect_kodaira_thurston_json",
        args: &[
            "inspect",
            "--builtin",
            "kodaira-thurston",
            "--format",
            "json",
        ],
        exit: 0,
    },
    Case {
        name: "inspect_unrealizable_lenient",
        args: &["inspect", "--file", "unrealizable.ddm", "--lenient"],
        exit: 0,
    },
    Case {
        name: "inspect_unrealizable",
        args: &["inspect", "--file", "unrealizable.ddm"],
        exit: 1,
    },
    Case {
        name: "inspect_broken",
        args: &["inspect", "--file", "broken.ddm"],
        exit: 2,
    },
    Case {
        name: "inspect_unknown_builtin",
        args: &["inspect", "--builtin", "sphere:2"],
        exit: 2,
    },
    Case {
        name: "construct_blowup_t3_t1",
        args: &[
            "construct",
            "blowup(builtin:torus:3, center=builtin:torus:1, codim=2)",
            "--format",
            "json",
        ],
        exit: 0,
    },
    Case {
        name: "construct_proj_point",
        args: &["construct", "proj(builtin:point, rank=3)"],
        exit: 0,
    },
    Case {
        name: "construct_nested",
        args: &[
            "construct",
            "blowup(prodcp(file:torus2.ddm, k=1), center=builtin:torus:1, codim=2)",
        ],
        exit: 0,
    },
    Case {
        name: "construct_excdiv_iwasawa",
        args: &[
            "construct",
            "excdiv(builtin:iwasawa, codim=2)",
            "--format",
            "json",
        ],
        exit: 0,
    },
    Case {
        name: "construct_codim_too_small",
        args: &[
            "construct",
            "blowup(builtin:torus:2, center=builtin:torus:1, codim=1)",
        ],
        exit: 1,
    },
    Case {
        name: "construct_parse_error",
        args: &["construct", "blowup(builtin:torus:2"],
        exit: 2,
    },
    Case {
        name: "ce_compute_iwasawa",
        args: &["ce-compute", "iwasawa.ceq"],
        exit: 0,
    },
    Case {
        name: "ce_compute_iwasawa_json",
        args: &["ce-compute", "iwasawa.ceq", "--format", "json"],
        exit: 0,
    },
    Case {
        name: "ce_compute_kodaira_thurston",
        args: &["ce-compute", "kodaira-thurston.ceq"],
        exit: 0,
    },
    Case {
        name: "ce_compute_abelian3",
        args: &["ce-compute", "abelian3.ceq"],
        exit: 0,
    },
    Case {
        name: "ce_compute_builtin_iwasawa",
        args: &["ce-compute", "--builtin", "iwasawa"],
        exit: 0,
    },
    Case {
        name: "ce_compute_nonintegrable",
        args: &["ce-compute", "nonintegrable.ceq"],
        exit: 1,
    },
    Case {
        name: "ce_compute_jacobi",
        args: &["ce-compute", "jacobi.ceq"],
        exit: 1,
    },
    Case {
        name: "sequence_roundtrip_t3",
        args: &[
            "sequence",
            "--start",
            "builtin:torus:3",
            "--steps",
            "roundtrip_t3.steps",
        ],
        exit: 0,
    },
    Case {
        name: "sequence_iwasawa_up_down",
        args: &[
            "sequence",
            "--start",
            "builtin:torus:5",
            "--steps",
            "iwasawa_up_down.steps",
        ],
        exit: 0,
    },
    Case {
        name: "sequence_unmatched_down",
        args: &[
            "sequence",
            "--start",
            "builtin:cpn:3",
            "--steps",
            "unmatched_down.steps",
        ],
        exit: 1,
    },
    Case {
        name: "verify_unknown_suite",
        args: &["verify", "nope"],
        exit: 2,
    },
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn run_bin(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_ddbar"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("spawn ddbar");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

/// Compares a case against `golden/<name>.out` (and `.err` for failing cases).
/// With `BLESS=1` the golden files are rewritten instead.
pub fn check_case(case: &Case) -> Result<(), String> {
    let got = run_bin(case.args);
    if got.code != case.exit {
        return Err(format!(
            "{}: exit {} (expected {}); stderr: {}",
            case.name,
            got.code,
            case.exit,
            String::from_utf8_lossy(&got.stderr)
        ));
    }
    let mut files = vec![("out", got.stdout)];
    if case.exit != 0 {
        files.push(("err", got.stderr));
    }
    for (ext, bytes) in files {
        let path = golden_dir().join(format!("{}.{ext}", case.name));
        if std::env::var_os("BLESS").is_some() {
            std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
            std::fs::write(&path, &bytes).map_err(|e| e.to_string())?;
            continue;
        }
        let want = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if want != bytes {
            return Err(format!(
                "{}.{ext} differs\n--- golden\n{}\n--- actual\n{}",
                case.name,
                String::from_utf8_lossy(&want),
                String::from_utf8_lossy(&bytes)
            ));
        }
    }
    Ok(())
}
