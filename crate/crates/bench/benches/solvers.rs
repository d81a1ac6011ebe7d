use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smbribe::solvers::*;
use smbribe::testkit::random::gen_instance;
use smbribe::ActionKind;
use smbribe_bench::uniform_request;

type Solver = fn(&SolveRequest) -> Result<ManipulationResult, SolveError>;

const SIZES: [usize; 4] = [30, 50, 100, 200];

fn polynomial(c: &mut Criterion) {
    let cases: [(&str, Goal, ActionKind, Solver); 7] = [
        ("const_ex_delete", Goal::ConstEx, ActionKind::Delete, const_ex_delete),
        ("const_ex_reorder_approx2", Goal::ConstEx, ActionKind::Reorder, const_ex_reorder_approx2),
        ("exact_ex_accdel", Goal::ExactEx, ActionKind::AccDelete, exact_ex_accdel),
        ("exact_ex_reorder", Goal::ExactEx, ActionKind::Reorder, exact_ex_reorder),
        ("exact_ex_swap", Goal::ExactEx, ActionKind::Swap, exact_ex_swap),
        ("exact_ex_add", Goal::ExactEx, ActionKind::Add, exact_ex_add),
        ("exact_uni_accdel", Goal::ExactUni, ActionKind::AccDelete, exact_uni_accdel),
    ];
    for (name, goal, action, solver) in cases {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        for n in SIZES {
            let mut req = uniform_request(goal, action, n, n as u64);
            if action == ActionKind::Add {
                req.instance = gen_instance(n, n as u64, 0.3);
            }
            group.bench_with_input(BenchmarkId::from_parameter(n), &req, |b, req| b.iter(|| solver(req).unwrap()));
        }
        group.finish();
    }
}

criterion_group!(benches, polynomial);
criterion_main!(benches);
