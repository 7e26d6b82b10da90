use dynsamp::construct::{search_minimal, SearchConfig};
use dynsamp::symmetry::monotone_symmetric_kernel_1d;
use dynsamp::{FiniteGroup, Kernel, Result, Tolerances};

fn run() -> Result<()> {
    let tol = Tolerances::default();
    let cfg = SearchConfig::default();
    let kernels = [
        Kernel::from_real_symbol(FiniteGroup::cyclic(4)?, &[1.0, 2.0, 1.0, 2.0])?,
        Kernel::from_real_symbol(FiniteGroup::cyclic(4)?, &[1.0, 2.0, 3.0, 4.0])?,
        monotone_symmetric_kernel_1d(5)?,
        Kernel::from_real_symbol(FiniteGroup::cyclic(6)?, &[1.0, 2.0, 1.0, 2.0, 1.0, 3.0])?,
    ];
    for k in &kernels {
        let r = search_minimal(k, k.group().order(), &tol, &cfg)?;
        let sym: Vec<f64> = k.symbol().iter().map(|z| z.re).collect();
        println!(
            "a_hat={sym:?}: lower bound {}, minimal size {:?}, {} sets {:?}",
            r.lower_bound,
            r.size,
            r.sets.len(),
            r.sets
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
