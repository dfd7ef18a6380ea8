#pragma once

#include <array>

// Reference series and the values a standard ADF/KPSS implementation reports
// for them (constant only, AIC lag choice, KPSS with 4 Bartlett lags).

namespace fixtures {

inline constexpr std::array<double, 100> kRandomWalk{
    0.0012301533574825742, 0.29997569086595244, 0.025837835503734863, -0.8647540032535393,
    -1.319424788425262, -2.311071343421724, -2.2509277408242854, -0.9107124952697518,
    -1.4029190138210814, -2.023393913641022, -1.5335518634558238, -1.176664855295763,
    -1.0712506062978644, -2.001718651006069, -2.0309704734693423, -1.3356672790110546,
    -2.6798818262961364, -3.1374975873363544, -5.038720327137199, -6.328258066922174,
    -8.169993104713907, -8.405084235788587, -9.672530717232291, -9.40126635841059,
    -9.244515271786364, -9.431446216416319, -11.948205927236831, -12.486898823083468,
    -12.53539976848454, -12.422090782481233, -13.952226547986626, -14.429979824020556,
    -15.408498902077195, -16.217336141502795, -15.156437518116716, -15.963972193448612,
    -15.996493898394132, -15.112104031010958, -15.695704463754259, -15.807406413338418,
    -15.696942270088938, -15.633160495833875, -16.858216322251568, -16.78207609187456,
    -15.423252670133024, -16.970397348261507, -16.11101466023991, -15.99166063454333,
    -16.63313102865055, -14.632714482308126, -13.870454770223414, -15.069743672328638,
    -14.995227443557175, -14.418537859886989, -14.607319985237739, -13.924409718042533,
    -13.990927038191948, -13.32367947735762, -11.885156885701468, -12.56081913670712,
    -12.357680526317512, -12.820988102855928, -12.693719691630097, -13.880914219480237,
    -14.460215815982911, -14.656411788787407, -13.757647916686999, -12.612425909232867,
    -13.935953701717121, -14.730596067704171, -14.08369264513075, -16.076112429305244,
    -16.53928229425761, -16.6365692199277, -15.37955424264088, -14.690150342070124,
    -15.017363762292321, -15.38593965639228, -15.636135056910204, -14.112605656454043,
    -14.54063059902691, -14.844310987391639, -14.491721920106373, -14.612492365192828,
    -14.809776593158551, -15.923843736309607, -15.935365204348155, -16.378946427322575,
    -15.212818651132352, -14.559730148431187, -14.58387376144112, -13.915492738173777,
    -14.255362289886927, -13.20323593145998, -13.208635492131608, -12.625253137951194,
    -13.91614638327468, -13.569466334396251, -15.257670451762793, -17.292999396702726,
};

inline constexpr std::array<double, 100> kAr1{
    0.0, -0.8999276075985952, -0.28591100808707504, 2.101801122442512,
    0.2191773798091744, -0.5143548965393188, -0.05177350220496049, 0.4671265403098761,
    0.05715720424917986, -0.17735172812862654, 0.613787091056231, 0.8268011825620138,
    -0.6202752407926818, -0.38931893901218273, -0.15937262084461723, -1.134170932471419,
    -0.3072463655613462, -1.011579659957217, 0.4662768779384342, 0.4258843515742895,
    0.302248661556195, -0.43990402207817647, -0.33856183491678227, -2.167027210365446,
    -2.2149210757057816, -0.7446207386641365, -2.500877411154213, -0.40383018409594307,
    -1.9480115674218803, -0.2172672810466726, -0.9541306734026604, 0.301925747641131,
    0.28191408140536534, -1.3958778995888061, 0.5512097997640517, 1.7173120554046375,
    0.7928511217021117, 0.1225092886787355, -0.0986123216312686, -1.0244584835943804,
    0.5863575179597275, -0.24971317275032306, -0.1760469990668381, -0.8813199027364627,
    -1.0667330510884285, -1.8110916771953849, 0.35152347511670023, 0.021674164352336933,
    0.9767587009049774, 0.5017039473657484, -0.44355155402001994, -0.5484610370122621,
    -0.8344615690090307, -0.4092716853196017, -0.5799026823367566, -0.5898730571101767,
    -1.6735112126910021, -1.6436015339666215, 0.8322567818171194, -0.2551048253431576,
    -1.1816462002950716, -0.25349676757250494, 1.2805238157702796, -0.8137623945960683,
    -0.6154030455493048, -0.9397540767095602, -2.230896512682183, -0.3805215470826999,
    -0.2137046920961946, -0.03541050175549196, -0.7700167233233352, 0.06977580133524902,
    -0.5044094488196965, -0.39510793290660895, -1.3058147586348174, -1.869010139525604,
    0.4010267855372206, -0.3065913117698649, 0.13838470047086945, 0.03540191546806241,
    -0.423444245028153, -0.7196830928512961, 0.27024104501993806, -0.16674708202394078,
    -0.23481718918326241, -0.0951870373971517, 1.1289148015534256, 1.244968375409851,
    1.0050844554329184, -0.06102916563678251, -1.4124833028248567, 0.24328828032287364,
    1.088091274382313, 0.4033372380678162, 0.7435524606374261, 1.153219284204118,
    1.4077940947670409, 1.6252805206299912, 0.35702260965386284, 1.693484287491649,
};

inline constexpr std::array<double, 120> kIntegratedAr2{
    0.0, 0.0, 1.2247210785859324, 1.4492466489498241,
    0.9185761564859325, 0.005431996865004729, 0.18647300640357567, 0.512976420967379,
    1.4014517831006337, -0.010738822962664152, 0.44195297945890144, 1.0407930825752096,
    1.944668056992671, 2.1707746767314275, 1.6561775891745898, 1.742697509316447,
    2.773502115198726, 3.1634990319920844, 2.935469621733219, 3.36735151134915,
    2.824548826249197, 0.8549191445730506, 0.23096400384687876, -0.22308599977385984,
    -2.22867004984648, -4.10985914274919, -5.104494942361777, -6.330122171690777,
    -8.259571653467436, -9.012915346789926, -7.9888374615226745, -7.3815197003260336,
    -8.06794843869707, -8.277007201330775, -7.479278030205304, -7.237933497228387,
    -6.787777720858986, -5.547212138347467, -5.1448759579597, -6.089159466462068,
    -6.428779827164309, -6.101721250072096, -4.704787227191687, -5.249325165396451,
    -6.656741065538979, -8.175996184878741, -10.399339332672692, -11.151134130350137,
    -10.407403852122895, -10.474417277359123, -9.352097341472874, -7.836677015709821,
    -6.636744322182329, -5.9697037123537795, -4.9737895900662625, -5.9083331391854195,
    -6.1539038470933045, -5.418106373568841, -6.670675254224772, -7.29592572262129,
    -7.54572668617239, -6.726509427722395, -6.599100971224737, -6.786661932510241,
    -6.594569528913185, -7.299307487113508, -7.181181334932434, -7.003847444687361,
    -6.440402332515396, -6.677372938622527, -5.902387292660878, -4.761102744822274,
    -4.486852734626944, -4.032730935767717, -2.582777698152154, -0.05786678174259574,
    -0.551482573621749, -0.7219935120495888, -0.21114682902916548, 0.052653682125096524,
    -0.9489849510655446, -0.3719196708530642, -0.9869269062129541, -0.9621053657578832,
    0.5391577253258159, -0.16720017021196554, -1.3439116753430067, -3.1472480272765964,
    -3.632182278861537, -1.8677667935577702, 1.35991880227217, 0.9890910712954888,
    -0.7766602517605619, -1.0213176329702764, 0.9409859873139317, 2.6129760181256687,
    2.281326952936739, 1.8778720142172984, 1.7186745695614798, 1.5404518619956513,
    0.7468063723054795, 0.7113456467041306, 1.236042484616184, 1.4685146774674704,
    1.2289010021039561, -0.26952543150921127, -1.5828728562094907, -0.7149037095990658,
    0.009323748911244767, -1.2562278368038218, -0.8983842188346385, 0.2262528361443117,
    2.90176901236623, 4.232199770997416, 3.7664187942578597, 1.6401762818492238,
    1.8280034374897884, 5.1480839975872295, 6.2628492497296495, 5.288596592761671,
};

}  // namespace fixtures
