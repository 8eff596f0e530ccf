//! Driving the command layer from code: a TOML recipe with overrides,
//! resolved and run exactly as `polariton critical --config ... --set ...`
//! would, writing into a temporary directory.

use polariton::cli::{run, Cli, Command, CommonArgs};
use polariton::config::RunConfig;

const RECIPE: &str = r#"
[system]
z = 4

[critical]
big_n = [1, 3]
detuning_g = [0.0, 12.0]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("polariton_cli_example");
    std::fs::create_dir_all(&dir)?;
    let recipe = dir.join("recipe.toml");
    std::fs::write(&recipe, RECIPE)?;

    let cfg = RunConfig::load(Some(&recipe), &["loss.q_cavity=2e6".to_string()])?;
    println!("resolved loss section: {:?}", cfg.loss);

    let args = CommonArgs {
        config: Some(recipe),
        out: Some(dir.join("critical")),
        ..CommonArgs::default()
    };
    let summary = run(Cli { command: Command::Critical(args) })?;
    println!("{}", summary.message);
    let csv = std::fs::read_to_string(summary.output_dir.join("critical.csv"))?;
    print!("{csv}");
    Ok(())
}
