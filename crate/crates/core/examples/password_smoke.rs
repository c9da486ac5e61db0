use leakage_games::games::{solve_game_iv, GameOptions};
use leakage_games::scenarios::{password_game, PasswordConfig};
use leakage_games::Strategy;

fn main() {
    let t0 = std::time::Instant::now();
    let spec = password_game(&PasswordConfig::standard()).unwrap();
    let sol = solve_game_iv(&spec, &GameOptions::default()).unwrap();
    println!("value = {} ~ {}", sol.value, sol.value.to_decimal_string(8));
    if let Strategy::MixedDefender(d) = &sol.defender {
        println!("defender = {:?}", d.weights());
    }
    if let Strategy::MixedAttacker(a) = &sol.attacker {
        println!("attacker marginal = {:?}", a.weights());
    }
    println!("elapsed = {:?}", t0.elapsed());
}
