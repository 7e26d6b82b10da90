use dynsamp::construct::{sym2d_set, Sym2dParams};
use dynsamp::frame::{frame_test_direct, frame_test_projection};
use dynsamp::{Result, SymmetryClass, SymmetryKind, Tolerances};

fn run() -> Result<()> {
    let tol = Tolerances::default();
    let d = 5;
    let cases = [
        Sym2dParams::Linf,
        Sym2dParams::Quadrantal {
            i1: 0,
            i2: 1,
            j1: 0,
            j2: 1,
        },
        Sym2dParams::DiagonalRow { i1: 0, i2: 1 },
        Sym2dParams::OctagonalRows {
            i1: 0,
            i2: 1,
            j1: 0,
            j2: 1,
        },
    ];
    for params in cases {
        let class = SymmetryClass::new(params.kind(), d)?;
        let orbits = class.orbits();
        let c = sym2d_set(d, params)?;
        let plan = c.plan().expect("symmetry recipes fix their depth");
        let k = class.random_kernel(7);
        let direct = frame_test_direct(&k, &plan, &tol)?;
        let proj = frame_test_projection(&k, &plan, &tol)?;
        println!(
            "{:?}: {} orbits (largest {}), |omega|={}, depth {:?}, direct {:?}, projection {:?}",
            params.kind(),
            orbits.len(),
            orbits.max_size(),
            c.omega.len(),
            plan.depth(c.omega[0]),
            direct.verdict,
            proj.verdict
        );
        if let Some(class_idx) = proj.failing_class {
            let pts: Vec<_> = orbits.classes[class_idx]
                .iter()
                .map(|&i| k.group().index(i))
                .collect();
            println!("  level set without full rank: {pts:?}");
        }
    }
    let shells = SymmetryClass::new(SymmetryKind::Linf, 7)?.orbits();
    println!(
        "l-infinity shells at d=7: {:?}",
        shells.classes.iter().map(Vec::len).collect::<Vec<_>>()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("Error: {e}");
        std::process::exit(1);
    }
}
