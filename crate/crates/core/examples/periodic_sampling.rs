use dynsamp::construct::periodic_w_set;
use dynsamp::frame::{frame_test_direct, min_period_bound, periodic_frame_test};
use dynsamp::{Error, FiniteGroup, Kernel, PeriodicPlan, Result, Tolerances};

fn run() -> Result<()> {
    let tol = Tolerances::default();
    let k = Kernel::from_real_symbol(FiniteGroup::cyclic(6)?, &[1.0, 2.0, 1.0, 4.0, 5.0, 6.0])?;
    println!(
        "largest slice multiplicity for m=3: {}",
        min_period_bound(&k, 3, &tol)?
    );

    for w in [vec![0], vec![0, 1]] {
        let plan = PeriodicPlan::cyclic(6, 3, &w, None)?;
        let slices = periodic_frame_test(&k, &plan, &tol)?;
        let direct = frame_test_direct(&k, &plan.induced_plan(), &tol)?;
        println!(
            "W={w:?} omega={:?}: slices {:?} (failing slice {:?}), direct {:?}",
            plan.induced_omega(),
            slices.verdict,
            slices.failing_slice,
            direct.verdict
        );
    }

    let accepted = periodic_w_set(6, 3, &[0, 2])?;
    println!("accepted recipe {:?}", accepted.recipe);
    match periodic_w_set(8, 4, &[0, 2]) {
        Err(Error::NotFullSpark { witness }) => {
            println!("W={{0,2}} over Z_4 rejected, dependent columns {witness:?}")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("Error: {e}");
        std::process::exit(1);
    }
}
