// Command-line front end. Talks to the library exclusively through the C
// interface in nilmult.h. Results go to stdout, diagnostics to stderr;
// exit code 0 = success, 1 = hypothesis or verification failure, 2 = bad
// usage or unparsable input.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "nilmult.h"

namespace {

using group_ptr = std::unique_ptr<nm_group, decltype(&nm_group_free)>;
using structure_ptr = std::unique_ptr<nm_structure, decltype(&nm_structure_free)>;
using hall_ptr = std::unique_ptr<nm_hall, decltype(&nm_hall_free)>;

std::string take_string(char* s) {
    std::string out = s == nullptr ? std::string() : std::string(s);
    nm_string_free(s);
    return out;
}

int exit_code_for(nm_status status) {
    switch (status) {
        case NM_OK: return 0;
        case NM_ERR_ARGUMENT:
        case NM_ERR_PARSE:
        case NM_ERR_DOMAIN: return 2;  // bad input on the command line
        default: return 1;             // hypothesis, resource or internal failure
    }
}

int report_error(nm_status status) {
    std::cerr << "error: " << nm_last_error() << "\n";
    return exit_code_for(status);
}

int run_multiplier(const std::string& group_text, const std::vector<unsigned>& row, bool json) {
    nm_group* group_raw = nullptr;
    if (nm_status st = nm_group_parse(group_text.c_str(), &group_raw); st != NM_OK)
        return report_error(st);
    group_ptr group(group_raw, &nm_group_free);

    int ok = 0;
    char* report_raw = nullptr;
    if (nm_status st = nm_group_validate(group.get(), row.data(), row.size(), &ok, &report_raw);
        st != NM_OK)
        return report_error(st);
    std::string report = take_string(report_raw);
    // First report line is the verdict, the rest are notes.
    std::size_t pos = 0;
    bool first = true;
    while (pos <= report.size()) {
        std::size_t nl = report.find('\n', pos);
        std::string line = report.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        std::cerr << (first ? "hypothesis: " : "note: ") << line << "\n";
        first = false;
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (ok == 0) return 1;

    nm_structure* value_raw = nullptr;
    if (nm_status st = nm_multiplier(group.get(), row.data(), row.size(), &value_raw); st != NM_OK)
        return report_error(st);
    structure_ptr value(value_raw, &nm_structure_free);

    char* text_raw = nullptr;
    nm_status st = json ? nm_structure_to_json(value.get(), &text_raw)
                        : nm_structure_format(value.get(), &text_raw);
    if (st != NM_OK) return report_error(st);
    std::cout << take_string(text_raw) << "\n";
    return 0;
}

int run_witt(unsigned weight, std::uint64_t letters) {
    char* out = nullptr;
    std::string d = std::to_string(letters);
    if (nm_status st = nm_chi(weight, d.c_str(), &out); st != NM_OK) return report_error(st);
    std::cout << take_string(out) << "\n";
    return 0;
}

int run_hall(unsigned letters, unsigned min_weight, unsigned max_weight, unsigned contains) {
    nm_hall* raw = nullptr;
    if (nm_status st = nm_hall_generate(letters, min_weight, max_weight, contains, &raw);
        st != NM_OK)
        return report_error(st);
    hall_ptr h(raw, &nm_hall_free);
    std::size_t count = 0;
    nm_hall_count(h.get(), &count);
    for (std::size_t i = 0; i < count; ++i) {
        char* item = nullptr;
        if (nm_status st = nm_hall_item(h.get(), i, &item); st != NM_OK) return report_error(st);
        std::cout << take_string(item) << "\n";
    }
    return 0;
}

int run_mobius(std::uint64_t m) {
    int value = 0;
    if (nm_status st = nm_mobius(m, &value); st != NM_OK) return report_error(st);
    std::cout << value << "\n";
    return 0;
}

int run_verify(const std::string& level) {
    auto log = [](const char* line, void*) { std::cout << line << "\n"; };
    std::size_t failed = 0;
    if (nm_status st = nm_verify(level == "full" ? 1 : 0, log, nullptr, &failed); st != NM_OK)
        return report_error(st);
    if (failed != 0) {
        std::cerr << "verification failed: " << failed << " checks\n";
        return 1;
    }
    std::cout << "verification: ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact multipliers of nilpotent products of cyclic groups"};
    app.set_version_flag("--version", nm_version());
    app.require_subcommand(1);

    auto* mult = app.add_subcommand(
        "multiplier", "Multiplier of a group expression for a class row");
    std::string group_text;
    std::vector<unsigned> row;
    bool json = false;
    mult->add_option("--group", group_text,
                     "Group expression, e.g. \"Z *[2] Z *[2] Z/5 *[1] Z/5\"")
        ->required();
    mult->add_option("--classrow", row, "Nilpotency classes c1[,c2,...]")
        ->required()
        ->delimiter(',');
    mult->add_flag("--json", json, "Emit the structure as JSON instead of text");

    auto* witt = app.add_subcommand(
        "witt", "Number of basic commutators of one weight");
    unsigned witt_weight = 0;
    std::uint64_t witt_letters = 0;
    witt->add_option("weight,--weight", witt_weight, "Commutator weight (>= 1)")->required();
    witt->add_option("letters,--letters", witt_letters, "Alphabet size")->required();

    auto* hall = app.add_subcommand(
        "hall", "List basic commutators in bracket notation");
    unsigned hall_letters = 0;
    unsigned hall_min = 1;
    unsigned hall_max = 0;
    unsigned hall_contains = 0;
    hall->add_option("--letters", hall_letters, "Alphabet size (>= 1)")->required();
    hall->add_option("--min-weight", hall_min, "Smallest weight to list (default 1)");
    hall->add_option("--max-weight", hall_max, "Largest weight to list")->required();
    hall->add_option("--contains", hall_contains, "Keep only commutators using this letter");

    auto* mobius = app.add_subcommand("mobius", "Moebius function of a positive integer");
    std::uint64_t mobius_m = 0;
    mobius->add_option("m", mobius_m, "Argument (>= 1)")->required();

    auto* verify = app.add_subcommand(
        "verify", "Run the library's self-verification suites");
    std::string level = "quick";
    verify->add_option("--level", level, "quick (default) or full")
        ->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message to stderr
        return 2;
    }

    if (*mult) return run_multiplier(group_text, row, json);
    if (*witt) return run_witt(witt_weight, witt_letters);
    if (*hall) return run_hall(hall_letters, hall_min, hall_max, hall_contains);
    if (*mobius) return run_mobius(mobius_m);
    if (*verify) return run_verify(level);
    return 2;
}
