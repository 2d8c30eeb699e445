// Regenerates the canonical scenario files shipped under scenarios/.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "senseflow/catalog.hpp"

namespace sf = senseflow;

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "scenarios";
    std::filesystem::create_directories(dir);

    sf::save_scenario(dir / "classroom.json", sf::classroom_scenario());
    sf::save_scenario(dir / "lab_day.json", sf::lab_day_scenario());
    sf::save_scenario(dir / "city.json", sf::city_scenario());
    sf::save_scenario(dir / "speed_walkthrough.json",
                      sf::speed_walkthrough_scenario(sf::WifiState::NonRegistered, sf::Screen::On,
                                                     sf::kSpeedNormal, 4, 13));
    sf::save_scenario(dir / "flow_walk_j1.json",
                      sf::flow_walk_scenario(sf::flow_target_straight(),
                                             sf::WifiState::NonRegistered, sf::Screen::On,
                                             sf::kSpeedNormal, 19));
    sf::save_scenario(dir / "flow_walk_j2.json",
                      sf::flow_walk_scenario(sf::flow_target_detour(),
                                             sf::WifiState::NonRegistered, sf::Screen::On,
                                             sf::kSpeedNormal, 19));

    std::ofstream(dir / "flow_targets.json")
        << "[[1, 2, 3, 4, 5, 6, 7], [1, 2, 5, 6, 4, 3, 7]]\n";

    std::ofstream(dir / "classroom_manifest.json") << R"({
  "scenario": "classroom.json",
  "collection": {"t_dataset": 600.0, "t_interval": 300.0},
  "analysis": {"t_win": 600.0},
  "out_dir": "../out/classroom"
}
)";
    std::ofstream(dir / "flow_manifest.json") << R"({
  "scenario": "flow_walk_j1.json",
  "collection": {"t_dataset": 600.0, "t_interval": 300.0},
  "analysis": {"t_win": 30.0, "targets": [[1, 2, 3, 4, 5, 6, 7], [1, 2, 5, 6, 4, 3, 7]]},
  "out_dir": "../out/flow"
}
)";

    std::cout << "wrote canonical scenarios to " << dir.string() << "\n";
    return 0;
}
