//! Modified Bessel functions I0, I1, K0, K1 via Chebyshev expansions
//! (Cephes coefficients, double precision).
//!
//! These back the closed-form route of the kernel evaluations. They are never
//! trusted bare: the `kernels` module gates every closed form against adaptive
//! quadrature of the defining integrals before use.

/// Chebyshev coefficients for exp(-x) I0(x) on [0, 8], argument x/2 - 2.
const I0_A: [f64; 30] = [
    -4.415_341_646_479_339_5E-18,
    3.330_794_518_822_238_4E-17,
    -2.431_279_846_547_955E-16,
    1.715_391_285_555_133E-15,
    -1.168_533_287_799_345_1E-14,
    7.676_185_498_604_936E-14,
    -4.856_446_783_111_929E-13,
    2.955_052_663_129_64E-12,
    -1.726_826_291_441_556E-11,
    9.675_809_035_373_237E-11,
    -5.189_795_601_635_263E-10,
    2.659_823_724_682_386_6E-9,
    -1.300_025_009_986_248E-8,
    6.046_995_022_541_919E-8,
    -2.670_793_853_940_612E-7,
    1.117_387_539_120_103_7E-6,
    -4.416_738_358_458_750_5E-6,
    1.644_844_807_072_889_6E-5,
    -5.754_195_010_082_104E-5,
    1.885_028_850_958_416_5E-4,
    -5.763_755_745_385_824E-4,
    1.639_475_616_941_335_7E-3,
    -4.324_309_995_050_576E-3,
    1.054_646_039_459_499_8E-2,
    -2.373_741_480_589_947E-2,
    4.930_528_423_967_071E-2,
    -9.490_109_704_804_764E-2,
    1.716_209_015_222_087_7E-1,
    -3.046_826_723_431_984E-1,
    6.767_952_744_094_761E-1,
];

/// Chebyshev coefficients for exp(-x) sqrt(x) I0(x) on [8, inf), argument 32/x - 2.
const I0_B: [f64; 25] = [
    -7.233_180_487_874_754E-18,
    -4.830_504_485_944_182E-18,
    4.465_621_420_296_76E-17,
    3.461_222_867_697_461E-17,
    -2.827_623_980_516_583_6E-16,
    -3.425_485_619_677_219E-16,
    1.772_560_133_056_526_3E-15,
    3.811_680_669_352_622_4E-15,
    -9.554_846_698_828_307E-15,
    -4.150_569_347_287_222E-14,
    1.540_086_217_521_41E-14,
    3.852_778_382_742_142_6E-13,
    7.180_124_451_383_666E-13,
    -1.794_178_531_506_806_2E-12,
    -1.321_581_184_044_771_3E-11,
    -3.149_916_527_963_241_6E-11,
    1.188_914_710_784_643_9E-11,
    4.940_602_388_224_97E-10,
    3.396_232_025_708_386_5E-9,
    2.266_668_990_498_178E-8,
    2.048_918_589_469_063_8E-7,
    2.891_370_520_834_756_7E-6,
    6.889_758_346_916_825E-5,
    3.369_116_478_255_694_3E-3,
    8.044_904_110_141_088E-1,
];

/// Chebyshev coefficients for exp(-x) I1(x) / x on [0, 8], argument x/2 - 2.
const I1_A: [f64; 29] = [
    2.777_914_112_761_046_4E-18,
    -2.111_421_214_358_166E-17,
    1.553_631_957_736_200_5E-16,
    -1.105_596_947_735_386_2E-15,
    7.600_684_294_735_408E-15,
    -5.042_185_504_727_912E-14,
    3.223_793_365_945_575E-13,
    -1.983_974_397_764_943_6E-12,
    1.173_618_629_889_090_1E-11,
    -6.663_489_723_502_027E-11,
    3.625_590_281_552_117E-10,
    -1.887_249_751_722_829_4E-9,
    9.381_537_386_495_773E-9,
    -4.445_059_128_796_328E-8,
    2.003_294_753_552_135_3E-7,
    -8.568_720_264_695_455E-7,
    3.470_251_308_137_678_5E-6,
    -1.327_316_365_603_943_6E-5,
    4.781_565_107_550_054E-5,
    -1.617_608_158_258_967_4E-4,
    5.122_859_561_685_758E-4,
    -1.513_572_450_631_253_2E-3,
    4.156_422_944_312_888E-3,
    -1.056_408_489_462_619_7E-2,
    2.472_644_903_062_651_6E-2,
    -5.294_598_120_809_499E-2,
    1.026_436_586_898_471E-1,
    -1.764_165_183_578_340_6E-1,
    2.525_871_864_436_336_5E-1,
];

/// Chebyshev coefficients for exp(-x) sqrt(x) I1(x) on [8, inf), argument 32/x - 2.
const I1_B: [f64; 25] = [
    7.517_296_310_842_104_8E-18,
    4.414_348_323_071_707_9E-18,
    -4.650_305_368_489_358_3E-17,
    -3.209_525_921_993_424E-17,
    2.962_628_997_645_950_1E-16,
    3.308_202_310_920_928_3E-16,
    -1.880_354_775_510_782_4E-15,
    -3.814_403_072_437_007_8E-15,
    1.042_027_698_412_880_3E-14,
    4.272_440_016_711_951_4E-14,
    -2.101_541_842_772_664_3E-14,
    -4.083_551_111_092_197_3E-13,
    -7.198_551_776_245_908_5E-13,
    2.035_628_544_147_089_5E-12,
    1.412_580_743_661_378_1E-11,
    3.252_603_583_015_488_2E-11,
    -1.897_495_812_350_541_2E-11,
    -5.589_743_462_196_583_8E-10,
    -3.835_380_385_964_237E-9,
    -2.631_468_846_889_519_5E-8,
    -2.512_236_237_870_208_9E-7,
    -3.882_564_808_877_690_4E-6,
    -1.105_889_387_626_237_2E-4,
    -9.761_097_491_361_468_4E-3,
    7.785_762_350_182_801_2E-1,
];

/// Chebyshev coefficients for K0(x) + ln(x/2) I0(x) on [0, 2], argument x^2 - 2.
const K0_A: [f64; 10] = [
    1.374_465_435_613_523_1E-16,
    4.259_816_142_796_610_2E-14,
    1.034_969_525_763_384_2E-11,
    1.904_516_377_220_208_9E-9,
    2.534_791_079_026_149_5E-7,
    2.286_212_103_119_451_8E-5,
    1.264_615_411_446_925_9E-3,
    3.597_993_651_536_150_2E-2,
    3.442_898_999_246_284_9E-1,
    -5.353_273_932_339_027_7E-1,
];

/// Chebyshev coefficients for exp(x) sqrt(x) K0(x) on [2, inf), argument 8/x - 2.
const K0_B: [f64; 25] = [
    5.300_433_772_686_262_8E-18,
    -1.647_580_430_152_421_3E-17,
    5.210_391_505_039_027_6E-17,
    -1.678_231_096_805_412_1E-16,
    5.512_055_978_524_319_4E-16,
    -1.848_593_377_343_779E-15,
    6.340_076_477_405_070_6E-15,
    -2.227_513_326_991_669_9E-14,
    8.032_890_775_363_575_2E-14,
    -2.980_096_923_172_730_4E-13,
    1.140_340_586_444_483_4E-12,
    -4.514_597_883_373_944_2E-12,
    1.855_949_114_954_717_9E-11,
    -7.957_489_244_477_107_5E-11,
    3.577_397_281_400_301_2E-10,
    -1.697_534_509_389_059_9E-9,
    8.574_034_017_414_226E-9,
    -4.660_489_897_687_947_8E-8,
    2.766_813_639_445_015_1E-7,
    -1.831_755_522_719_119_5E-6,
    1.394_981_371_887_649_9E-5,
    -1.284_954_958_162_780_3E-4,
    1.569_883_885_730_053_4E-3,
    -3.144_810_131_196_450_1E-2,
    2.440_303_082_065_955_5E0,
];

/// Chebyshev coefficients for x (K1(x) - ln(x/2) I1(x)) on [0, 2], argument x^2 - 2.
const K1_A: [f64; 11] = [
    -7.023_863_479_386_287_6E-18,
    -2.427_449_850_519_366E-15,
    -6.666_901_694_199_329E-13,
    -1.411_488_392_633_527_8E-10,
    -2.213_387_630_734_725_9E-8,
    -2.433_406_141_565_968_2E-6,
    -1.730_288_957_513_052_1E-4,
    -6.975_723_859_639_864_4E-3,
    -1.226_111_808_226_571_5E-1,
    -3.531_559_607_765_448_8E-1,
    1.525_300_227_338_947_8E0,
];

/// Chebyshev coefficients for exp(x) sqrt(x) K1(x) on [2, inf), argument 8/x - 2.
const K1_B: [f64; 25] = [
    -5.754_195_010_082_103_7E-18,
    1.793_414_127_314_946_6E-17,
    -5.683_322_176_184_425_5E-17,
    1.835_909_219_097_597_4E-16,
    -6.056_326_972_474_691_5E-16,
    2.039_562_080_658_112_1E-15,
    -7.019_837_090_418_313_5E-15,
    2.477_154_424_481_304_4E-14,
    -8.976_705_182_324_994_4E-14,
    3.348_419_666_078_429_2E-13,
    -1.289_173_960_951_028_9E-12,
    5.139_639_673_481_730_3E-12,
    -2.129_967_838_427_568_4E-11,
    9.218_315_187_605_005_3E-11,
    -4.190_354_759_341_896_5E-10,
    2.015_049_755_197_032_9E-9,
    -1.034_576_246_567_809_7E-8,
    5.741_084_125_450_049_5E-8,
    -3.501_960_603_087_812_6E-7,
    2.406_484_947_837_217_1E-6,
    -1.936_197_974_166_083E-5,
    1.952_155_184_713_516_3E-4,
    -2.857_816_859_622_779_4E-3,
    1.039_237_365_768_172_4E-1,
    2.720_626_190_484_442_7E0,
];

fn chbevl(x: f64, coeffs: &[f64]) -> f64 {
    let mut b0 = coeffs[0];
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for c in coeffs.iter().skip(1) {
        b2 = b1;
        b1 = b0;
        b0 = x.mul_add(b1, *c) - b2;
    }
    0.5 * (b0 - b2)
}

/// Modified Bessel function of the first kind, order 0.
pub(crate) fn i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 8.0 {
        ax.exp() * chbevl(0.5 * ax - 2.0, &I0_A)
    } else {
        ax.exp() * chbevl(32.0 / ax - 2.0, &I0_B) / ax.sqrt()
    }
}

/// Modified Bessel function of the first kind, order 1.
pub(crate) fn i1(x: f64) -> f64 {
    let ax = x.abs();
    let r = if ax <= 8.0 {
        chbevl(0.5 * ax - 2.0, &I1_A) * ax * ax.exp()
    } else {
        ax.exp() * chbevl(32.0 / ax - 2.0, &I1_B) / ax.sqrt()
    };
    if x < 0.0 {
        -r
    } else {
        r
    }
}

/// Modified Bessel function of the second kind, order 0, for x > 0.
pub(crate) fn k0(x: f64) -> f64 {
    if x <= 0.0 {
        return if x == 0.0 { f64::INFINITY } else { f64::NAN };
    }
    if x <= 2.0 {
        chbevl(x * x - 2.0, &K0_A) - (0.5 * x).ln() * i0(x)
    } else {
        (-x).exp() * chbevl(8.0 / x - 2.0, &K0_B) / x.sqrt()
    }
}

/// Modified Bessel function of the second kind, order 1, for x > 0.
pub(crate) fn k1(x: f64) -> f64 {
    if x <= 0.0 {
        return if x == 0.0 { f64::INFINITY } else { f64::NAN };
    }
    if x <= 2.0 {
        (0.5 * x).ln() * i1(x) + chbevl(x * x - 2.0, &K1_A) / x
    } else {
        (-x).exp() * chbevl(8.0 / x - 2.0, &K1_B) / x.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Spot values pinned from independent adaptive quadrature of the integral
    // representations (see kernels::tests for the full gates).
    #[test]
    fn k0_spot_values() {
        assert_relative_eq!(k0(0.1), 2.427_069_024_702_016_4, max_relative = 1e-14);
        assert_relative_eq!(k0(1.0), 0.421_024_438_240_708_23, max_relative = 1e-14);
        assert_relative_eq!(k0(2.0), 0.113_893_872_749_533_4, max_relative = 1e-14);
        assert_relative_eq!(k0(10.0), 1.778_006_231_616_765e-5, max_relative = 1e-14);
    }

    #[test]
    fn k1_spot_values() {
        assert_relative_eq!(k1(0.1), 9.853_844_780_870_606, max_relative = 1e-14);
        assert_relative_eq!(k1(1.0), 0.601_907_230_197_234_6, max_relative = 1e-14);
        assert_relative_eq!(k1(2.0), 0.139_865_881_816_522_46, max_relative = 1e-14);
        assert_relative_eq!(k1(10.0), 1.864_877_345_382_558_5e-5, max_relative = 1e-14);
    }

    #[test]
    fn k_functions_decay_monotonically() {
        let mut prev0 = f64::INFINITY;
        let mut prev1 = f64::INFINITY;
        for i in 0..200 {
            let x = 1e-3 * (10.0f64 / 1e-3).powf(i as f64 / 199.0);
            let (a, b) = (k0(x), k1(x));
            assert!(a < prev0 && b < prev1, "not decreasing at x = {x}");
            assert!(a > 0.0 && b > 0.0);
            prev0 = a;
            prev1 = b;
        }
    }

    #[test]
    fn wronskian_identity() {
        // K1(x) I0(x) + K0(x) I1(x) = 1/x
        for &x in &[0.25, 0.5, 1.0, 1.9, 2.1, 4.0, 7.9, 8.1, 20.0] {
            let w = k1(x) * i0(x) + k0(x) * i1(x);
            assert_relative_eq!(w, 1.0 / x, max_relative = 1e-13);
        }
    }

    #[test]
    fn boundary_and_zero_behaviour() {
        assert!(k0(0.0).is_infinite());
        assert!(k1(0.0).is_infinite());
        assert_eq!(i0(0.0), 1.0);
        assert_eq!(i1(0.0), 0.0);
        // branch seam continuity at x = 2
        assert_relative_eq!(k0(2.0 - 1e-12), k0(2.0 + 1e-12), max_relative = 1e-10);
        assert_relative_eq!(k1(2.0 - 1e-12), k1(2.0 + 1e-12), max_relative = 1e-10);
    }
}
