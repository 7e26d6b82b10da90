use dynsamp::group::{fourier_matrix, FiniteGroup};
use dynsamp::linalg::numerical_rank;
use dynsamp::spark::{annihilator_subgroup, find_singular_witness};
use dynsamp::Result;

fn run() -> Result<()> {
    let d = 3;
    let f = fourier_matrix(&FiniteGroup::new(&[d, d])?);
    for rows in [
        vec![(0, 0), (1, 2)],
        vec![(0, 0), (1, 0), (2, 2)],
        vec![(0, 1), (1, 1), (2, 0)],
    ] {
        let (k, l) = (rows[0], rows[1]);
        let gen = ((k.0 + d - l.0) % d, (k.1 + d - l.1) % d);
        println!(
            "rows {rows:?}: annihilator of {gen:?} = {:?}",
            annihilator_subgroup(d, gen)
        );
        if let Some(cols) = find_singular_witness(d, &rows, 1e-9)? {
            let r: Vec<usize> = rows.iter().map(|&(a, b)| a * d + b).collect();
            let c: Vec<usize> = cols.iter().map(|&(a, b)| a * d + b).collect();
            let rank = numerical_rank(&f.submatrix(&r, &c)?, 1e-9)?;
            println!("  singular columns {cols:?}, rank {rank} < {}", rows.len());
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("Error: {e}");
        std::process::exit(1);
    }
}
