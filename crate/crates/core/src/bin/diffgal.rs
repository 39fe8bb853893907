use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let json_mode = argv.iter().any(|a| a == "--json");
    let (report, code) = diffgal::cli::run(argv);
    if json_mode {
        println!("{}", serde_json::to_string(&report.payload).expect("payload serializes"));
        if code != 0 {
            let _ = writeln!(std::io::stderr(), "{}", report.human);
        }
    } else {
        println!("{}", report.human.trim_end());
    }
    std::process::exit(code);
}
