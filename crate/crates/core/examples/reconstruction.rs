use dynsamp::frame::frame_test_direct;
use dynsamp::random::{random_kernel_with_multiplicity, random_vector};
use dynsamp::recon::subsample;
use dynsamp::{reconstruct, simulate_samples, FiniteGroup, Result, SamplingPlan, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let g = FiniteGroup::cyclic(8)?;
    let k = random_kernel_with_multiplicity(&g, 2, &mut rng);
    let plan = SamplingPlan::uniform(g, [0, 1], 7)?;
    let f = random_vector(8, &mut rng);

    println!("S_omega f = {:.3?}", subsample(&f, &plan.omega())?);
    let adjoint = frame_test_direct(&k.adjoint(), &plan, &Tolerances::default())?;
    println!(
        "adjoint family: {:?}, sqrt(B/A) = {:.6}",
        adjoint.verdict,
        adjoint.condition_number().unwrap_or(f64::NAN)
    );

    for noise in [0.0, 1e-4, 1e-3, 1e-2] {
        let samples = simulate_samples(&k, &f, &plan, noise, 9)?;
        let r = reconstruct(&k, &plan, &samples, 1e-9)?;
        let err: f64 = r
            .estimate
            .iter()
            .zip(&f)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        println!(
            "noise {noise:>7}: {} samples, error {err:.3e}, residual {:.3e}, condition {:.6}, exact {}",
            samples.len(),
            r.residual_norm,
            r.condition_number,
            r.exact_flag
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("Error: {e}");
        std::process::exit(1);
    }
}
