// Dump/inspect tool for classic container files.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "pncdf/dump.hpp"
#include "pncdf/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dump a classic netCDF file as CDL-style text"};
    std::string path;
    pncdf::DumpOptions options;
    std::string var;
    app.add_option("path", path, "file to dump")->required();
    app.add_flag("--header-only", options.header_only, "print only the header listing");
    app.add_option("--var", var, "dump data for this variable only");
    CLI11_PARSE(app, argc, argv);
    if (!var.empty()) options.var_filter = var;

    try {
        std::cout << pncdf::dump(path, options);
    } catch (const pncdf::Error& e) {
        std::cerr << "error: " << pncdf::err_name(e.code()) << " at byte offset " << e.offset()
                  << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
