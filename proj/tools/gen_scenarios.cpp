// Writes the built-in scenarios to a directory as JSON files.
// The committed files under scenarios/ are produced by this tool.

#include <filesystem>
#include <iostream>

#include "censim/scenario_io.hpp"

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "scenarios";
    std::filesystem::create_directories(dir);
    for (const std::string& name : censim::stock_scenario_names()) {
        censim::Scenario s = censim::stock_scenario(name);
        censim::atomic_write(dir / (name + ".json"), censim::scenario_to_json(s) + "\n");
        std::cout << "wrote " << (dir / (name + ".json")).string() << "\n";
    }
    return 0;
}
