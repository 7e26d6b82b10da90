use dynsamp::frame::{frame_test_direct, frame_test_projection, min_sensor_bound, saturating_plan};
use dynsamp::{FiniteGroup, Kernel, Result, SamplingPlan, Tolerances};

fn show(k: &Kernel, plan: &SamplingPlan, tol: &Tolerances) -> Result<()> {
    let p = frame_test_projection(k, plan, tol)?;
    let d = frame_test_direct(k, plan, tol)?;
    println!(
        "  omega={:?} depths={:?}: projection={:?} direct={:?} rank={}/{}",
        plan.omega(),
        plan.entries().map(|(_, l)| l).collect::<Vec<_>>(),
        p.verdict,
        d.verdict,
        d.rank,
        d.required_rank
    );
    Ok(())
}

fn run() -> Result<()> {
    let tol = Tolerances::default();
    let z4 = FiniteGroup::cyclic(4)?;

    let distinct = Kernel::from_real_symbol(z4.clone(), &[1.0, 2.0, 3.0, 4.0])?;
    println!(
        "a_hat = [1,2,3,4], M_A = {}",
        min_sensor_bound(&distinct, &tol)
    );
    for i in 0..4 {
        show(&distinct, &SamplingPlan::uniform(z4.clone(), [i], 3)?, &tol)?;
    }

    let paired = Kernel::from_real_symbol(z4.clone(), &[1.0, 2.0, 1.0, 2.0])?;
    println!(
        "a_hat = [1,2,1,2], M_A = {}",
        min_sensor_bound(&paired, &tol)
    );
    show(
        &paired,
        &SamplingPlan::uniform(z4.clone(), [1, 2], 1)?,
        &tol,
    )?;
    show(
        &paired,
        &SamplingPlan::uniform(z4.clone(), [1, 3], 1)?,
        &tol,
    )?;
    show(
        &paired,
        &SamplingPlan::uniform(z4.clone(), [1, 3], 10)?,
        &tol,
    )?;

    let tight = saturating_plan(&paired, &[0, 1], &tol)?;
    println!(
        "saturating depths for {{0,1}}: {:?}",
        tight.entries().collect::<Vec<_>>()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("Error: {e}");
        std::process::exit(1);
    }
}
