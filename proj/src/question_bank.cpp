#include "pzx/error.hpp"
#include "pzx/gamification.hpp"

#include <map>

namespace pzx {

namespace {

using Bank = std::map<std::string, LayeredAnswer, std::less<>>;

Bank build_bank() {
    Bank b;
    b["bode magnitude"] = {
        "How much the system amplifies a sine wave at each frequency, in decibels.",
        "Both axes are logarithmic: frequency in rad/s and gain in dB. Each real pole bends the curve down by "
        "20 dB per decade beyond its corner frequency 1/T, and each zero bends it up by the same amount.",
        "The curve is 20 log10 |G(j omega)|. A factor 1/(1 + T s) contributes -10 log10(1 + (T omega)^2) dB.",
    };
    b["bode phase"] = {
        "How far the output sine lags or leads the input sine, in degrees.",
        "A real pole adds up to 90 degrees of lag, centered at its corner frequency. A time delay adds lag "
        "that grows without bound as the frequency increases.",
        "The curve is arg G(j omega), unwrapped so it stays continuous. A delay e^(-L s) contributes "
        "-L omega radians.",
    };
    b["step response"] = {
        "The output when the input jumps from 0 to 1 at t = 0.",
        "For stable systems the curve settles at the static gain G(0). Poles far into the left half plane "
        "make it settle quickly; complex poles make it overshoot and ring.",
        "The curve is the inverse Laplace transform of G(s)/s. For 1/(1 + T s) it is 1 - e^(-t/T).",
    };
    b["impulse response"] = {
        "The output after a very short, very strong kick at t = 0.",
        "It is the slope of the step response. Its area equals the static gain of a stable system.",
        "The curve is the inverse Laplace transform of G(s) itself, g(t) = L^-1{G(s)}.",
    };
    b["nyquist diagram"] = {
        "The frequency response drawn as one curve in the complex plane.",
        "Each point is G(j omega) for one frequency: its distance from the origin is the gain and its angle is "
        "the phase. How the curve passes the point -1 decides closed-loop stability.",
        "The curve is omega -> (Re G(j omega), Im G(j omega)) for omega > 0. A circle of radius r around the "
        "origin marks the gain 20 log10 r dB.",
    };
    b["pole-zero map axes"] = {
        "The horizontal axis is the real part of s, the vertical axis the imaginary part.",
        "Crosses mark poles and circles mark zeros. Points left of the vertical axis decay, points right of it "
        "grow, and the height of a point sets how fast it oscillates.",
        "A pole at s = sigma + j omega_d contributes a term e^(sigma t) cos(omega_d t + phi) to the response.",
    };
    b["poles"] = {
        "The values of s where the denominator of G(s) is zero.",
        "Poles set the natural modes of the system. Their distance from the imaginary axis sets the decay "
        "rate; complex pairs oscillate.",
        "For G(s) = N(s)/D(s) the poles are the roots of D(s) = 0. A second-order pair is "
        "-zeta omega_0 +/- j omega_0 sqrt(1 - zeta^2).",
    };
    b["zeros"] = {
        "The values of s where the numerator of G(s) is zero.",
        "Zeros do not create new modes but reshape how the existing ones combine. A zero in the left half "
        "plane speeds up the response and can produce overshoot.",
        "For G(s) = N(s)/D(s) the zeros are the roots of N(s) = 0. The factor 1 + T s has its zero at -1/T.",
    };
    b["gain margin readout"] = {
        "How much the loop gain can grow before the closed loop becomes unstable.",
        "Read it at the phase crossover frequency, where the phase passes -180 degrees. The gap between the "
        "magnitude curve and 0 dB at that frequency is the margin. Without a crossover it is infinite.",
        "GM = 1 / |G(j omega_pc)| with arg G(j omega_pc) = -180 degrees; in decibels GM_dB = "
        "-20 log10 |G(j omega_pc)|.",
    };
    b["phase margin readout"] = {
        "How much extra phase lag the loop tolerates before the closed loop becomes unstable.",
        "Read it at the gain crossover frequency, where the magnitude passes 0 dB. The distance between the "
        "phase curve and -180 degrees there is the margin.",
        "PM = 180 degrees + arg G(j omega_gc) with |G(j omega_gc)| = 1.",
    };
    b["time delay"] = {
        "The output starts to react only after a dead time L.",
        "A delay leaves the magnitude untouched but adds phase lag proportional to frequency, which makes the "
        "phase curve fall off steeply and wraps the Nyquist curve around the origin.",
        "The delay factor is e^(-L s), so |e^(-j L omega)| = 1 and arg e^(-j L omega) = -L omega.",
    };
    b["time constant"] = {
        "The time a first-order step response needs to reach about 63% of its final value.",
        "A smaller time constant means a faster system and a pole further to the left. The corner of the "
        "Bode magnitude sits at 1/T.",
        "For 1/(1 + T s) the step response is 1 - e^(-t/T), and 1 - e^(-1) = 0.632 at t = T.",
    };
    return b;
}

const Bank& bank() {
    static const Bank b = build_bank();
    return b;
}

} // namespace

const std::vector<std::string>& question_topics() {
    static const std::vector<std::string> topics = [] {
        std::vector<std::string> t;
        for (const auto& [k, v] : bank()) {
            t.push_back(k);
        }
        return t;
    }();
    return topics;
}

const LayeredAnswer& question_bank(std::string_view topic) {
    const auto it = bank().find(topic);
    if (it == bank().end()) {
        throw DomainError("unknown topic '" + std::string(topic) + "'");
    }
    return it->second;
}

} // namespace pzx
