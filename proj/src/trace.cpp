#include "trajpred/trace.hpp"

#include "trajpred/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <utility>

namespace trajpred {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

std::optional<double> to_double(std::string_view field) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) return std::nullopt;
    return value;
}

struct PendingPoint {
    TracePoint point;
    std::size_t origin;  // line number or timestep ordinal, for diagnostics
};

using PendingMap = std::map<std::string, std::vector<PendingPoint>>;

TraceSet assemble(PendingMap pending, std::string scenario_name) {
    TraceSet set;
    set.scenario_name = std::move(scenario_name);
    for (auto& [id, rows] : pending) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const PendingPoint& a, const PendingPoint& b) { return a.point.t < b.point.t; });
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].point.t == rows[i - 1].point.t) {
                throw ValidationError("duplicate timestamp t=" + format_number(rows[i].point.t) +
                                      " for vehicle " + id);
            }
        }
        std::vector<TracePoint> points;
        points.reserve(rows.size());
        for (auto& r : rows) points.push_back(r.point);
        set.trajectories.emplace(id, Trajectory(id, std::move(points)));
    }
    return set;
}

}  // namespace

// --- Trajectory -------------------------------------------------------------

Trajectory::Trajectory(std::string vehicle_id, std::vector<TracePoint> points)
    : vehicle_id_(std::move(vehicle_id)), points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("trajectory '" + vehicle_id_ + "' has no points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.t) || p.t < 0.0) {
            throw ValidationError("vehicle " + vehicle_id_ + ": invalid timestamp at index " + std::to_string(i));
        }
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw ValidationError("vehicle " + vehicle_id_ + ": non-finite position at t=" + format_number(p.t));
        }
        if (p.speed && (!std::isfinite(*p.speed) || *p.speed < 0.0)) {
            throw ValidationError("vehicle " + vehicle_id_ + ": invalid speed at t=" + format_number(p.t));
        }
        if (i > 0 && !(p.t > points_[i - 1].t)) {
            throw ValidationError("vehicle " + vehicle_id_ + ": timestamps not strictly increasing at t=" +
                                  format_number(p.t));
        }
    }
}

double Trajectory::mean_sampling_period() const {
    if (points_.size() < 2) return 0.0;
    return (points_.back().t - points_.front().t) / static_cast<double>(points_.size() - 1);
}

std::optional<std::size_t> Trajectory::index_at(double t, double tol) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), t - tol,
                               [](const TracePoint& p, double v) { return p.t < v; });
    if (it != points_.end() && std::abs(it->t - t) <= tol) {
        return static_cast<std::size_t>(it - points_.begin());
    }
    return std::nullopt;
}

Trajectory Trajectory::slice(std::size_t first, std::size_t last) const {
    if (first > last || last >= points_.size()) throw ValidationError("slice out of range");
    return Trajectory(vehicle_id_, std::vector<TracePoint>(points_.begin() + static_cast<std::ptrdiff_t>(first),
                                                           points_.begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

void TraceSet::add(Trajectory traj) {
    const std::string id = traj.vehicle_id();
    if (!trajectories.emplace(id, std::move(traj)).second) {
        throw ValidationError("duplicate vehicle id " + id);
    }
}

bool approx_equal(const TraceSet& a, const TraceSet& b, double tol) {
    if (a.scenario_name != b.scenario_name || a.trajectories.size() != b.trajectories.size()) return false;
    const auto close = [tol](double u, double v) { return std::abs(u - v) <= tol; };
    for (auto ita = a.trajectories.begin(), itb = b.trajectories.begin(); ita != a.trajectories.end(); ++ita, ++itb) {
        if (ita->first != itb->first || ita->second.size() != itb->second.size()) return false;
        for (std::size_t i = 0; i < ita->second.size(); ++i) {
            const auto& p = ita->second[i];
            const auto& q = itb->second[i];
            if (!close(p.t, q.t) || !close(p.x, q.x) || !close(p.y, q.y)) return false;
            if (p.speed.has_value() != q.speed.has_value()) return false;
            if (p.speed && !close(*p.speed, *q.speed)) return false;
        }
    }
    return true;
}

// --- CSV ----------------------------------------------------------------------

TraceSet parse_csv(std::istream& in, std::string scenario_name) {
    PendingMap pending;
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> header_arity;
    bool first_content = true;

    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) continue;
        const auto fields = split_fields(content);

        if (first_content) {
            first_content = false;
            if (fields.front() == "vehicle_id") {
                static constexpr std::array<std::string_view, 5> expected{"vehicle_id", "t", "x", "y", "speed"};
                if (fields.size() < 4 || fields.size() > 5 ||
                    !std::equal(fields.begin(), fields.end(), expected.begin())) {
                    throw ParseError("unexpected header; want vehicle_id,t,x,y[,speed]", line_no);
                }
                header_arity = fields.size();
                continue;
            }
        }

        if (fields.size() < 4 || fields.size() > 5 || (header_arity && fields.size() != *header_arity)) {
            throw ParseError("expected " + (header_arity ? std::to_string(*header_arity) : std::string("4 or 5")) +
                                 " fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        if (fields[0].empty()) throw ParseError("empty vehicle_id", line_no);

        TracePoint p;
        static constexpr std::array<const char*, 3> names{"t", "x", "y"};
        std::array<double*, 3> slots{&p.t, &p.x, &p.y};
        for (std::size_t k = 0; k < 3; ++k) {
            const auto v = to_double(fields[k + 1]);
            if (!v) throw ParseError(std::string("non-numeric ") + names[k] + " field '" + std::string(fields[k + 1]) + "'", line_no);
            if (!std::isfinite(*v)) throw ParseError(std::string("non-finite ") + names[k] + " field", line_no);
            *slots[k] = *v;
        }
        if (fields.size() == 5 && !fields[4].empty()) {
            const auto v = to_double(fields[4]);
            if (!v) throw ParseError("non-numeric speed field '" + std::string(fields[4]) + "'", line_no);
            if (!std::isfinite(*v)) throw ParseError("non-finite speed field", line_no);
            p.speed = *v;
        }
        pending[std::string(fields[0])].push_back({p, line_no});
    }
    return assemble(std::move(pending), std::move(scenario_name));
}

TraceSet parse_csv(std::string_view text, std::string scenario_name) {
    std::istringstream in{std::string(text)};
    return parse_csv(in, std::move(scenario_name));
}

void emit_csv(const TraceSet& traces, std::ostream& out) {
    out << "vehicle_id,t,x,y,speed\n";
    for (const auto& [id, traj] : traces.trajectories) {
        for (const auto& p : traj.points()) {
            out << id << ',' << format_number(p.t) << ',' << format_number(p.x) << ',' << format_number(p.y) << ',';
            if (p.speed) out << format_number(*p.speed);
            out << '\n';
        }
    }
}

std::string emit_csv(const TraceSet& traces) {
    std::ostringstream out;
    emit_csv(traces, out);
    return out.str();
}

// --- FCD XML ------------------------------------------------------------------

namespace {

namespace pt = boost::property_tree;

double required_number(const pt::ptree& attrs, const char* name, const std::string& where) {
    const auto raw = attrs.get_optional<std::string>(name);
    if (!raw) throw ValidationError(where + ": missing required attribute '" + name + "'");
    const auto v = to_double(trim(*raw));
    if (!v || !std::isfinite(*v)) throw ValidationError(where + ": attribute '" + name + "' is not a finite number");
    return *v;
}

void collect_timesteps(const pt::ptree& node, PendingMap& pending, std::size_t& ordinal) {
    for (const auto& [tag, child] : node) {
        if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
        if (tag != "timestep") {
            collect_timesteps(child, pending, ordinal);
            continue;
        }
        ++ordinal;
        const std::string where = "timestep #" + std::to_string(ordinal);
        const auto* attrs = child.get_child_optional("<xmlattr>").get_ptr();
        if (attrs == nullptr) throw ValidationError(where + ": missing required attribute 'time'");
        const double time = required_number(*attrs, "time", where);

        for (const auto& [vtag, vehicle] : child) {
            if (vtag != "vehicle") continue;
            const auto* vattrs = vehicle.get_child_optional("<xmlattr>").get_ptr();
            if (vattrs == nullptr) throw ValidationError(where + ": vehicle without attributes");
            const auto id = vattrs->get_optional<std::string>("id");
            if (!id || id->empty()) throw ValidationError(where + ": vehicle missing required attribute 'id'");
            const std::string vwhere = where + " vehicle " + *id;
            TracePoint p;
            p.t = time;
            p.x = required_number(*vattrs, "x", vwhere);
            p.y = required_number(*vattrs, "y", vwhere);
            if (vattrs->count("speed") != 0) p.speed = required_number(*vattrs, "speed", vwhere);
            pending[*id].push_back({p, ordinal});
        }
    }
}

}  // namespace

TraceSet parse_fcd_xml(std::istream& in, std::string scenario_name) {
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::no_concat_text);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError("XML syntax error: " + e.message(), e.line());
    }
    PendingMap pending;
    std::size_t ordinal = 0;
    collect_timesteps(tree, pending, ordinal);
    return assemble(std::move(pending), std::move(scenario_name));
}

TraceSet parse_fcd_xml(std::string_view text, std::string scenario_name) {
    std::istringstream in{std::string(text)};
    return parse_fcd_xml(in, std::move(scenario_name));
}

namespace {

std::string xml_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (const char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string emit_fcd_xml(const TraceSet& traces) {
    std::map<double, std::vector<std::pair<const std::string*, const TracePoint*>>> steps;
    for (const auto& [id, traj] : traces.trajectories) {
        for (const auto& p : traj.points()) steps[p.t].emplace_back(&id, &p);
    }
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<fcd-export>\n";
    for (const auto& [t, vehicles] : steps) {
        out << "    <timestep time=\"" << format_number(t) << "\">\n";
        for (const auto& [id, p] : vehicles) {
            out << "        <vehicle id=\"" << xml_escape(*id) << "\" x=\"" << format_number(p->x) << "\" y=\""
                << format_number(p->y) << '"';
            if (p->speed) out << " speed=\"" << format_number(*p->speed) << '"';
            out << "/>\n";
        }
        out << "    </timestep>\n";
    }
    out << "</fcd-export>\n";
    return out.str();
}

// --- speeds -------------------------------------------------------------------

Trajectory derive_speeds(const Trajectory& traj) {
    std::vector<TracePoint> points = traj.points();
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!points[i].speed) {
            points[i].speed = distance(points[i].position(), points[i - 1].position()) / (points[i].t - points[i - 1].t);
        }
    }
    if (!points.front().speed) points.front().speed = points.size() > 1 ? *points[1].speed : 0.0;
    return Trajectory(traj.vehicle_id(), std::move(points));
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0 as well
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

}  // namespace trajpred
