#include "lifmap/spike_train.hpp"

#include <fstream>
#include <sstream>

#include "lifmap/errors.hpp"
#include "text_util.hpp"

namespace lifmap {

void SpikeTrain::validate() const
{
    if (dt <= 0.0) {
        throw domain_error("SpikeTrain: dt must be positive");
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i] >= n_steps) {
            throw domain_error("SpikeTrain: event index out of range");
        }
        if (i > 0 && events[i] <= events[i - 1]) {
            throw domain_error("SpikeTrain: events must be sorted and unique");
        }
    }
}

void write_spike_train(std::ostream& out, const SpikeTrain& train)
{
    out << "dt=" << detail::dtos(train.dt) << " n_steps=" << train.n_steps << "\n";
    for (std::uint32_t e : train.events) {
        out << e << "\n";
    }
}

SpikeTrain read_spike_train(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header)) {
        throw io_error("spike train: missing header line");
    }
    std::istringstream hs(header);
    std::string dt_field;
    std::string n_field;
    if (!(hs >> dt_field >> n_field) || dt_field.rfind("dt=", 0) != 0 ||
        n_field.rfind("n_steps=", 0) != 0) {
        throw io_error("spike train: malformed header '" + header + "'");
    }

    SpikeTrain train;
    train.dt = detail::parse_double(dt_field.substr(3), "dt");
    train.n_steps =
        static_cast<std::uint32_t>(detail::parse_uint(n_field.substr(8), "n_steps"));

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        train.events.push_back(
            static_cast<std::uint32_t>(detail::parse_uint(line, "event index")));
    }
    train.validate();
    return train;
}

void save_spike_train(const std::string& path, const SpikeTrain& train)
{
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open for writing: " + path);
    }
    write_spike_train(out, train);
    if (!out) {
        throw io_error("write failed: " + path);
    }
}

SpikeTrain load_spike_train(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open: " + path);
    }
    return read_spike_train(in);
}

}  // namespace lifmap
