//! The command-line verbs, driven in process.

use crystalcalc::cli::run;

fn main() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let pres = format!("{data}/gm.pres");
    let morph = format!("{data}/square.morph");
    let jobs: Vec<Vec<&str>> = vec![
        vec!["verify-simplicial", "--p", "2", "--N", "2", "--D", "5", "--m-max", "2"],
        vec!["lift", "--presentation", &pres, "--p", "3", "--N", "3", "--morphism", &morph],
        vec!["known", "--algebra", "a1", "--p", "2", "--N", "3", "--E", "4"],
        vec!["compare"],
    ];
    for job in jobs {
        let o = run(std::iter::once("crystalcalc").chain(job.iter().copied()));
        println!("$ crystalcalc {}\n{}exit {}\n", job.join(" "), o.report, o.code);
    }
}
