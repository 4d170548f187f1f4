use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pnl_core::exec::Exec;
use pnl_core::game::{build_game_tree_with, solve_with, GameState, Mode, Role};
use pnl_core::model::{enumerate_models, FrameClass, NetworkModel};
use pnl_core::parse_formula;
use pnl_core::sequent::{parse_sequent, prove_with, Budget};

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn ring(n: usize) -> NetworkModel {
    let names: Vec<String> = (0..n).map(|k| format!("a{k}")).collect();
    let mut b = NetworkModel::builder(&names);
    for k in 0..n {
        for l in k + 1..n {
            b = if (k + l) % 3 == 0 {
                b.negative(&names[k], &names[l])
            } else {
                b.positive(&names[k], &names[l])
            };
        }
    }
    b.valuation("p", names.iter().step_by(2)).build().unwrap()
}

fn games(c: &mut Criterion) {
    let mut group = c.benchmark_group("game");
    let m = ring(7);
    let f = parse_formula("[A] lb(p)").unwrap();
    let g = GameState::at_agent(Role::P, "a0", f).with_snapshot(m.clone());
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::new("build_solve", name), &exec, |b, &exec| {
            b.iter(|| {
                solve_with(
                    build_game_tree_with(&m, &g, Mode::Agent, exec).unwrap(),
                    exec,
                )
                .winner()
            })
        });
    }
    group.finish();
}

fn validity(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_validity");
    let f = parse_formula("[A] lb(p) -> (<+> <-> p -> <-> p)").unwrap();
    let names = ["i", "j", "k", "l"].into_iter().map(Into::into).collect();
    let props = ["p".into()].into_iter().collect();
    let models: Vec<NetworkModel> = enumerate_models(4, &props, &names, FrameClass::Pnl).collect();
    let i = "i".into();
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::new("models", name), &exec, |b, &exec| {
            b.iter(|| {
                exec.any(&models, |m| {
                    !pnl_core::model::eval_nominal(m, &i, &f).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("prove");
    group.sample_size(10);
    let s = parse_sequent(". => i: ([A] ([+] p -> p)) -> ([+] [+] p -> <+> p)").unwrap();
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::new("ds", name), &exec, |b, &exec| {
            b.iter(|| prove_with(&s, FrameClass::Pnl, Budget::default(), exec).is_proved())
        });
    }
    group.finish();
}

criterion_group!(benches, games, validity, search);
criterion_main!(benches);
