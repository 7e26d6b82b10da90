use dynsamp::spark::{
    is_full_spark_rows, is_uniformly_distributed, row_spark, transform_rows, RowSelection,
    RowTransform, DEFAULT_SUBSET_CAP,
};
use dynsamp::Result;

const TOL: f64 = 1e-9;

fn run() -> Result<()> {
    // Every row selection of F_p is full spark for prime p.
    let sel = RowSelection::cyclic(7, &[0, 2, 3])?;
    let r = row_spark(&sel, TOL, DEFAULT_SUBSET_CAP)?;
    println!(
        "F_7 rows {:?}: spark {} (full: {})",
        sel.rows(),
        r.spark,
        r.is_full_spark(sel.len())
    );

    // Composite order: a dependent column set shows up.
    let sel = RowSelection::cyclic(4, &[0, 2])?;
    let r = row_spark(&sel, TOL, DEFAULT_SUBSET_CAP)?;
    println!(
        "F_4 rows {:?}: spark {}, witness columns {:?}",
        sel.rows(),
        r.spark,
        r.witness
    );

    // Prime powers: full spark exactly when rows spread evenly over residues.
    for rows in [vec![0, 1, 2, 3], vec![0, 2, 4, 6], vec![0, 1, 4, 5]] {
        let full = is_full_spark_rows(&RowSelection::cyclic(8, &rows)?, TOL)?;
        println!(
            "F_8 rows {rows:?}: full spark {full}, uniformly distributed {}",
            is_uniformly_distributed(8, &rows)
        );
    }

    let sel = RowSelection::cyclic(9, &[0, 1, 5])?;
    for op in [
        RowTransform::Translate(vec![4]),
        RowTransform::Dilate(vec![2]),
        RowTransform::Complement,
    ] {
        let image = transform_rows(&sel, &op)?;
        println!(
            "{op:?} -> {:?}, full spark {}",
            image.rows(),
            is_full_spark_rows(&image, TOL)?
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
