// Writes the built-in catalog systems out as system-definition JSON files,
// one per entry (plus the Gaudin Y variant), so the CLI path and the
// programmatic path stay interchangeable.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lieham/catalog.hpp"
#include "lieham/json_io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"export catalog systems as JSON definition files"};
    std::string dir = ".";
    app.add_option("--dir", dir, "output directory");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<std::string, lieham::Params>> jobs = {
        {"riccati2", {}},
        {"ks2", {}},
        {"sw", {}},
        {"euler_so3", {}},
        {"euler_sl2", {}},
        {"gaudin_counterexample", {{"field", "X"}}},
        {"gaudin_counterexample", {{"field", "Y"}}},
        {"affine_linearizable", {}},
    };
    try {
        for (const auto& [name, params] : jobs) {
            lieham::LHSystem sys = lieham::get_system(name, params);
            std::string file = name;
            if (name == "gaudin_counterexample") file += "_" + params.at("field");
            std::string path = dir + "/" + file + ".json";
            std::ofstream out(path);
            if (!out) {
                std::cerr << "cannot write " << path << "\n";
                return 1;
            }
            out << lieham::save_system(sys).dump(2) << "\n";
            std::cout << path << "\n";
        }
    } catch (const lieham::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
