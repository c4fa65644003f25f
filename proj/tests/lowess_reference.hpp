#pragma once

// Reference lowess fits of lowess_fixture_series() at x = 0..99, computed with
// an independent implementation of Cleveland's algorithm (statsmodels
// 0.14, delta = 0).

#include <cmath>
#include <numbers>
#include <vector>

inline std::vector<double> lowess_fixture_series() {
    std::vector<double> y(100);
    for (int t = 0; t < 100; ++t) {
        double noise = std::fmod(std::sin(t * 12.9898 + 1.0) * 43758.5453, 1.0);
        if (noise < 0.0) noise += 1.0;
        y[t] = std::sin(2.0 * std::numbers::pi * t / 100.0) + 0.3 * (noise - 0.5);
    }
    return y;
}

// span 0.8, 3 robustness iterations
inline constexpr double kLowessSpan08Iter3[100] = {
    0.79031138105172416, 0.785355575119558, 0.78004887708032988, 0.77438309646623549,
    0.76835235187223483, 0.7619529639743321, 0.75518335492848809, 0.74804396954414243,
    0.74053721808821105, 0.73266755419792839, 0.72444112289940532, 0.71586545236685317,
    0.70694886187097683, 0.69770053680582178, 0.6881307120263821, 0.67825074116092676,
    0.66807264583445869, 0.6576089303524858, 0.64687224825464518, 0.63587557139968043,
    0.62463205516864351, 0.61315471947543476, 0.60145630514312021, 0.58954948710195687,
    0.57744692165449119, 0.56516106395021115, 0.5527040964161013, 0.5400878599068849,
    0.52732334470587039, 0.51442032472596311, 0.50138677224660744, 0.48822723405153551,
    0.47493958919698448, 0.46150872419316863, 0.44789549209613344, 0.43401756160243821,
    0.41971644965847221, 0.40470967639281635, 0.38853915359527674, 0.37057462122519319,
    0.3407192742229283, 0.3095255552365383, 0.27707593121781365, 0.24347052683145423,
    0.20882444299582562, 0.173263447066964, 0.13692876088665604, 0.09997445045698046,
    0.062557818100634197, 0.024839218175932487, -0.013015313343296831, -0.050839000531312462,
    -0.088460505542796095, -0.12571133884136437, -0.16242990450831957, -0.19846585157060259,
    -0.23367878994894439, -0.26793956237788663, -0.30112819524442141, -0.33314167884627932,
    -0.36389451871900352, -0.38306868828947527, -0.40037578975671839, -0.41648096277273172,
    -0.4318659307877098, -0.4468285042777087, -0.46153642910192888, -0.47607754437466221,
    -0.49049422257123104, -0.5048033720766677, -0.5190082149745433, -0.53310463784010353,
    -0.54708439307592116, -0.56093684317286452, -0.57465018941189361, -0.58821167089748128,
    -0.60160767702154838, -0.61482385519613392, -0.62784543758568934, -0.64065745589111545,
    -0.65324474282408851, -0.66559217723344177, -0.67768478959555778, -0.68950788087348103,
    -0.70104711438178002, -0.71228834573979927, -0.72321812231045957, -0.73382392196335999,
    -0.74409374213716672, -0.75401648650517661, -0.76358255055638802, -0.77278369975584182,
    -0.78161334151515671, -0.79006652352997264, -0.7981404859173894, -0.80583480363926896,
    -0.81315116466230897, -0.82009343040430482, -0.82666753939396787, -0.83288181240524073,
};

// span 0.3, no robustness iterations
inline constexpr double kLowessSpan03Iter0[100] = {
    0.095528542065473593, 0.14103484106550693, 0.18612440287837889, 0.23080596221877428,
    0.2750974519438536, 0.31901664334620572, 0.36257887356077489, 0.40579742346409475,
    0.44868579244970347, 0.4912717137774551, 0.5335905481742137, 0.5756797090989203,
    0.61753244034944388, 0.65898077282177936, 0.69921319327026177, 0.73116302143197409,
    0.76060694346744462, 0.78769332905821632, 0.8125422552739594, 0.83515758013064845,
    0.85531231327938018, 0.87282422069542343, 0.88750639602913939, 0.89924296056056252,
    0.90775858673243981, 0.91256078630054926, 0.9131002887503531, 0.90933087321183537,
    0.9016047459130333, 0.89044206666082948, 0.87599277210614734, 0.8581789281738158,
    0.83700367367725992, 0.81255070917167538, 0.78488277074983848, 0.75391123521713266,
    0.719493050223869, 0.6815813334570916, 0.64040550181173894, 0.59619988281849645,
    0.54911409877859452, 0.49928007304811717, 0.44682882343787911, 0.39210778915030325,
    0.3357985481969874, 0.27865179215857594, 0.22108362566315209, 0.16329071735559508,
    0.1053618714666182, 0.047305701271193393, -0.010890593608021817, -0.069258984402997867,
    -0.12773386009253157, -0.18603653151508157, -0.24389705816591867, -0.30100639945838736,
    -0.35717562178944828, -0.41230203424771156, -0.46621852390355717, -0.51829575021431173,
    -0.56798706545084732, -0.61513764613897859, -0.65980517864318511, -0.70203210073593281,
    -0.74165420782920288, -0.77851277211398673, -0.81235975570647623, -0.84309930630041796,
    -0.87053851538398808, -0.89426496064301941, -0.91398593932097805, -0.9294384484075805,
    -0.940404949156878, -0.94708487920690398, -0.94975086669915831, -0.94834320215591317,
    -0.94294186381051848, -0.93350159795164234, -0.92000931670435904, -0.90250163316488596,
    -0.88093470207720548, -0.85554912329561228, -0.82684877979029736, -0.79535238362913407,
    -0.76145042751146297, -0.72529918648786107, -0.68318211117973482, -0.64028604948398837,
    -0.59711049055801535, -0.55372737406311123, -0.51013766649585268, -0.46632507978922,
    -0.42227430283973877, -0.37796496267292951, -0.33339259688066514, -0.28856554265918183,
    -0.24348471890243598, -0.19814290796553413, -0.15251580361103412, -0.10659223963344587,
};
